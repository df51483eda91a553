#ifndef MBW_TESTS_PROPERTIES_HPP
#define MBW_TESTS_PROPERTIES_HPP

#include <span>
#include <string>
#include <vector>

#include "mbw/clustering.hpp"
#include "mbw/copulas.hpp"
#include "mbw/mbw_model.hpp"

namespace mbw::testing {

/// Outcome of one property sweep with a short human-readable summary.
struct Check {
  bool ok = true;
  std::string detail;
};

/// Copulas exercised by the sweeps: GFGM over a, b in {1,2,3} and
/// rho in {-1,-0.5,0,0.5,1}; Gaussian over rho in {-0.9,0,0.6,0.9}.
std::vector<CopulaSpec> copula_sweep();

/// Parameter sets drawn from the hazard-plot captions and the study design.
std::vector<MbwParams> model_sweep();

Check copula_boundary_conditions();
Check copula_rectangle_inequality();
Check copula_density_integrates_to_one();
Check joint_density_integrates_to_one();
Check closed_form_pdf_matches_composition();
Check closed_form_survival_matches_sklar();
Check hazard_times_survival_is_density();
Check dbscan_matches_oracle();
Check sampler_residuals();
Check sampler_marginal_ks();

/// Reference DBSCAN: core graph components numbered by smallest core index,
/// border points take the smallest adjacent cluster id.
std::vector<int> dbscan_oracle(std::span<const Point> pts, const DbscanParams& p);

/// Kolmogorov-Smirnov statistic of a sample against a continuous CDF.
template <typename Cdf>
double ks_statistic(std::vector<double> sample, Cdf cdf);

}  // namespace mbw::testing

#include "properties_impl.hpp"

#endif  // MBW_TESTS_PROPERTIES_HPP
