#ifndef MBW_SAMPLER_HPP
#define MBW_SAMPLER_HPP

#include <cstddef>
#include <vector>

#include "mbw/mbw_model.hpp"
#include "mbw/point.hpp"
#include "mbw/rng.hpp"

namespace mbw {

/// The uniforms behind one bivariate Weibull draw: v solves C_u(v) = t.
struct SampleTrace {
  double u = 0.0;
  double t = 0.0;
  double v = 0.0;
};

/// Conditional-inversion sampling: u, t ~ U(0,1), v = C_u^{-1}(t),
/// x = F_1^{-1}(u), y = F_2^{-1}(v). Two uniforms per pair.
std::vector<Point> sample_bvw(std::size_t n, const BivariateWeibull& m, RandomStream& rng,
                              std::vector<SampleTrace>* trace = nullptr);
std::vector<Point> sample_bvw(std::size_t n, const BivariateWeibull& m, SeededStream s);

/// Each draw consumes exactly three uniforms: one Bernoulli(p) selector,
/// then two for the chosen component (the square or the Weibull pair).
std::vector<Point> sample_mbw(std::size_t n, const MbwParams& m, RandomStream& rng);
std::vector<Point> sample_mbw(std::size_t n, const MbwParams& m, SeededStream s);

}  // namespace mbw

#endif  // MBW_SAMPLER_HPP
