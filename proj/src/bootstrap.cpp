#include "mbw/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "mbw/errors.hpp"
#include "mbw/parallel.hpp"
#include "mbw/rng.hpp"

namespace mbw {

double percentile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) {
    throw DomainError("percentile of an empty sample");
  }
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double sample_sd(std::span<const double> v) {
  if (v.size() < 2) {
    return 0.0;
  }
  double mean = 0.0;
  for (double x : v) {
    mean += x;
  }
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) {
    ss += (x - mean) * (x - mean);
  }
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

BootstrapResult bootstrap(std::span<const Point> data, const Fitter& fitter, std::size_t B,
                          std::uint64_t seed, unsigned workers, double level) {
  if (data.empty()) {
    throw DomainError("bootstrap: empty data");
  }
  if (B < 1) {
    throw DomainError("bootstrap: need at least one replicate");
  }
  if (!(level > 0.0 && level < 1.0)) {
    throw DomainError("bootstrap: level must lie in (0, 1)");
  }

  std::vector<std::optional<FitResult>> fits(B);
  parallel_for(B, workers, [&](std::size_t r) {
    RandomStream rng({seed, r});
    std::vector<Point> resample(data.size());
    for (auto& p : resample) {
      p = data[rng.index(data.size())];
    }
    try {
      FitResult fit = fitter(resample);
      if (fit.convergence.converged) {
        fits[r] = std::move(fit);
      }
    } catch (const Error&) {
      // Counted below as a failed replicate.
    }
  });

  BootstrapResult out;
  out.replicates = B;
  for (const auto& f : fits) {
    if (!f) {
      ++out.failures;
      continue;
    }
    if (out.names.empty()) {
      for (const auto& p : f->params) {
        out.names.push_back(p.name);
      }
      out.draws.resize(out.names.size());
    }
    for (std::size_t j = 0; j < out.names.size(); ++j) {
      out.draws[j].push_back(f->params[j].estimate);
    }
  }
  if (static_cast<double>(out.failures) > kMaxBootstrapFailureRate * static_cast<double>(B)) {
    throw ConvergenceError("bootstrap: " + std::to_string(out.failures) + " of " +
                           std::to_string(B) + " replicates failed");
  }
  const double tail = 0.5 * (1.0 - level);
  for (const auto& d : out.draws) {
    out.bse.push_back(sample_sd(d));
    std::vector<double> sorted = d;
    std::sort(sorted.begin(), sorted.end());
    out.bci.emplace_back(percentile_sorted(sorted, tail), percentile_sorted(sorted, 1.0 - tail));
  }
  return out;
}

}  // namespace mbw
