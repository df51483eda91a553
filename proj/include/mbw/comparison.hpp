#ifndef MBW_COMPARISON_HPP
#define MBW_COMPARISON_HPP

#include <optional>
#include <span>
#include <vector>

#include "mbw/fitting.hpp"

namespace mbw {

struct ComparisonOptions {
  /// Copula for M3. When unset, both families are fitted and the one with
  /// the smaller AIC is kept.
  std::optional<CopulaFamily> family;
  std::size_t min_pts = 4;
  std::optional<double> eps;
};

struct ModelComparison {
  FitResult m1;
  FitResult m2;
  FitResult m3;
  /// M3 fits under every copula tried, in the order gfgm, gaussian.
  std::vector<FitResult> m3_candidates;
  DevianceTest m3_vs_m2;
  DevianceTest m2_vs_m1;
};

/// Fits M1, M2 and M3 with standard errors and the two deviance tests.
ModelComparison compare_models(std::span<const Point> data, const ComparisonOptions& opt = {});

}  // namespace mbw

#endif  // MBW_COMPARISON_HPP
