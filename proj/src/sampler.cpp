#include "mbw/sampler.hpp"

#include <algorithm>
#include <cmath>

namespace mbw {

namespace {

constexpr double kBelowOne = 1.0 - 0x1.0p-53;

Point draw_bvw(const BivariateWeibull& m, RandomStream& rng, SampleTrace* trace) {
  const double u = rng.uniform();
  const double t = rng.uniform();
  const double v = std::min(conditional_quantile(t, u, m.copula), kBelowOne);
  if (trace != nullptr) {
    *trace = {u, t, v};
  }
  return {weibull_quantile(u, m.margin1), weibull_quantile(v, m.margin2)};
}

}  // namespace

std::vector<Point> sample_bvw(std::size_t n, const BivariateWeibull& m, RandomStream& rng,
                              std::vector<SampleTrace>* trace) {
  m.validate();
  std::vector<Point> out;
  out.reserve(n);
  if (trace != nullptr) {
    trace->clear();
    trace->reserve(n);
  }
  for (std::size_t i = 0; i < n; ++i) {
    SampleTrace tr;
    out.push_back(draw_bvw(m, rng, &tr));
    if (trace != nullptr) {
      trace->push_back(tr);
    }
  }
  return out;
}

std::vector<Point> sample_bvw(std::size_t n, const BivariateWeibull& m, SeededStream s) {
  RandomStream rng(s);
  return sample_bvw(n, m, rng);
}

std::vector<Point> sample_mbw(std::size_t n, const MbwParams& m, RandomStream& rng) {
  m.validate();
  std::vector<Point> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const bool early = rng.uniform() < m.p;
    if (early) {
      const double x = m.rect.x0 + m.rect.d * rng.uniform();
      const double y = m.rect.y0 + m.rect.d * rng.uniform();
      out.push_back({x, y});
    } else {
      out.push_back(draw_bvw(m.base, rng, nullptr));
    }
  }
  return out;
}

std::vector<Point> sample_mbw(std::size_t n, const MbwParams& m, SeededStream s) {
  RandomStream rng(s);
  return sample_mbw(n, m, rng);
}

}  // namespace mbw
