#ifndef MBW_STUDIES_HPP
#define MBW_STUDIES_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mbw/mbw_model.hpp"

namespace mbw {

/// Bias = mean - truth; MSE = mean squared deviation from truth.
std::pair<double, double> bias_mse(std::span<const double> estimates, double truth);

/// Share of intervals with lo <= truth <= hi.
double coverage_probability(std::span<const std::pair<double, double>> intervals, double truth);

/// The reference design: Weibull(4, 1.5) and Weibull(3.5, 5) joined by a
/// Gaussian copula with rho = 0.6, square side 0.1 at the origin, p = 0.3.
MbwParams reference_truth();

struct StudyConfig {
  MbwParams truth = reference_truth();
  std::vector<std::size_t> sample_sizes = {100, 200, 300};
  std::size_t replicates = 200;
  /// Bootstrap resamples per replicate. With 0, BSE and BCI summarise the
  /// spread of the replicate estimates themselves.
  std::size_t bootstrap_B = 0;
  double level = 0.95;
  std::uint64_t base_seed = 20240917;
  unsigned workers = 1;
  std::size_t min_pts = 4;
  /// DBSCAN radius per sample size; other sizes fall back to select_eps.
  std::map<std::size_t, double> eps = {{100, 0.45}, {200, 0.35}, {300, 0.25}};

  void validate() const;
};

struct StudyRow {
  std::string parameter;
  double truth = 0.0;
  double sample_mean = 0.0;
  double cp = 0.0;
  double bse = 0.0;
  double bci_lo = 0.0;
  double bci_hi = 0.0;
  double mse = 0.0;
  double bias = 0.0;
  /// Standard deviation of the replicate estimates.
  double sd = 0.0;
  /// Replicates with no interval (boundary estimate or singular Hessian);
  /// these count as misses in cp.
  std::size_t missing_intervals = 0;
};

struct StudyReport {
  std::size_t n = 0;
  std::size_t replicates = 0;
  std::size_t failures = 0;
  std::vector<StudyRow> rows;

  const StudyRow& row(const std::string& parameter) const;
};

/// Largest tolerated share of failed replicates in one sample size.
inline constexpr double kMaxStudyFailureRate = 0.1;

/// Replicate r at sample size n samples from stream r under
/// derive_seed(base_seed, n); output is independent of cfg.workers.
std::vector<StudyReport> run_study(const StudyConfig& cfg);

void write_study_csv(std::ostream& out, const StudyReport& report);

}  // namespace mbw

#endif  // MBW_STUDIES_HPP
