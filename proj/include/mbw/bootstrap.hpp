#ifndef MBW_BOOTSTRAP_HPP
#define MBW_BOOTSTRAP_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mbw/fitting.hpp"
#include "mbw/point.hpp"

namespace mbw {

using Fitter = std::function<FitResult(std::span<const Point>)>;

struct BootstrapResult {
  std::vector<std::string> names;
  std::vector<double> bse;
  std::vector<std::pair<double, double>> bci;
  /// Re-estimates by parameter, in replicate order (failed replicates omitted).
  std::vector<std::vector<double>> draws;
  std::size_t replicates = 0;
  std::size_t failures = 0;
};

/// Largest tolerated share of failed replicates.
inline constexpr double kMaxBootstrapFailureRate = 0.2;

/// Case-resampling bootstrap. Replicate r draws its resample from stream r
/// under `seed`, so results do not depend on `workers`. A replicate fails
/// when the fitter throws or reports no convergence.
BootstrapResult bootstrap(std::span<const Point> data, const Fitter& fitter, std::size_t B,
                          std::uint64_t seed, unsigned workers = 1, double level = 0.95);

/// Linear-interpolation percentile (the common "type 7" rule) of sorted data.
double percentile_sorted(std::span<const double> sorted, double q);

/// Sample standard deviation with the n - 1 divisor; 0 for fewer than two values.
double sample_sd(std::span<const double> v);

}  // namespace mbw

#endif  // MBW_BOOTSTRAP_HPP
