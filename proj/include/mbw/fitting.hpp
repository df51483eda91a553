#ifndef MBW_FITTING_HPP
#define MBW_FITTING_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mbw/clustering.hpp"
#include "mbw/mbw_model.hpp"
#include "mbw/nelder_mead.hpp"
#include "mbw/point.hpp"

namespace mbw {

/// M1: independent exponential margins. M2: exponential margins joined by
/// FGM (a = b = 1). M3: the full early-failure mixture.
enum class ModelKind { M1, M2, M3 };

std::string model_name(ModelKind m);
ModelKind parse_model(const std::string& name);

struct ParamEstimate {
  std::string name;
  double estimate = 0.0;
  /// Absent when the parameter sits on a boundary, is held fixed, or the
  /// information matrix could not be inverted.
  std::optional<double> se;
  bool at_boundary = false;
  bool fixed = false;
  /// Wald test of the estimate against zero.
  std::optional<double> z;
  std::optional<double> p_value;
};

struct Convergence {
  bool converged = false;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  int restarts = 0;
  /// Names of parameters whose estimate ended on a constraint boundary.
  std::vector<std::string> boundary;
  std::string message;
};

struct FitResult {
  ModelKind model = ModelKind::M3;
  CopulaFamily family = CopulaFamily::Gfgm;
  /// Full parameter set at the estimate. For M1/M2 only `base` is
  /// meaningful; rect and p describe no mixture.
  MbwParams estimates;
  std::vector<ParamEstimate> params;
  double loglik = 0.0;
  double aic = 0.0;
  /// Free parameters counted by the AIC (d included for M3).
  int k = 0;
  std::size_t n = 0;
  Convergence convergence;

  // Stage-one clustering for M3.
  std::optional<DbscanParams> dbscan;
  std::vector<Point> origin_cluster;
  std::string se_diagnostic;

  const ParamEstimate& param(std::string_view name) const;
  double estimate(std::string_view name) const { return param(name).estimate; }
};

/// Bijection between a constrained parameter and the real line.
class ParamTransform {
 public:
  enum class Kind { Log, ScaledTanh, Logit };

  static ParamTransform log() { return {Kind::Log, 1.0}; }
  /// value = scale * tanh(z), for correlations in (-scale, scale).
  static ParamTransform scaled_tanh(double scale) { return {Kind::ScaledTanh, scale}; }
  static ParamTransform logit() { return {Kind::Logit, 1.0}; }

  double to_unconstrained(double value) const;
  double to_constrained(double z) const;
  Kind kind() const { return kind_; }

 private:
  ParamTransform(Kind k, double c) : kind_(k), c_(c) {}
  Kind kind_;
  double c_;
};

/// Log-likelihood of the origin-anchored or general mixture. Points on the
/// closed square contribute log(p/d^2 + q f), others log(q f). Returns -inf
/// when an outside point has zero Weibull density. Throws SingularityError
/// when a zero coordinate meets a margin with shape < 1.
double loglik_mbw(std::span<const Point> data, const MbwParams& m);

/// Sum of log f_XY: the log-likelihood of M1 and M2 style models.
double loglik_bvw(std::span<const Point> data, const BivariateWeibull& m);

struct DEstimate {
  double d_hat = 0.0;
  OriginCluster cluster;
  DbscanParams dbscan;
};

/// d_hat = largest coordinate among members of the cluster nearest the
/// origin. eps defaults to select_eps(data, min_pts).
DEstimate estimate_d(std::span<const Point> data, std::size_t min_pts = 4,
                     std::optional<double> eps = std::nullopt);

struct FitConfig {
  CopulaFamily family = CopulaFamily::Gfgm;
  double gfgm_a = 1.0;
  double gfgm_b = 1.0;
  std::size_t min_pts = 4;
  std::optional<double> eps;
  NelderMeadOptions optimizer;
  /// Starting shapes, scales, rho and p. Defaults: shapes 1.5, scales and
  /// rho from the points outside C1, p = |C1| / n. Its square is ignored.
  std::optional<MbwParams> start;
};

/// Smallest sample fit_mbw accepts.
inline constexpr std::size_t kMinFitSize = 10;

/// Two-stage M3 fit: d from the origin cluster, then the remaining
/// parameters by maximum likelihood with d held at d_hat.
FitResult fit_mbw(std::span<const Point> data, const FitConfig& config = {});

/// Closed-form exponential MLEs (beta = sample means).
FitResult fit_m1(std::span<const Point> data);

/// Exponential margins with the FGM copula, maximised over (beta1, beta2, rho).
/// When fix_rho is set, rho is held at that value.
FitResult fit_m2(std::span<const Point> data, const NelderMeadOptions& opt = {},
                 std::optional<double> fix_rho = std::nullopt);

/// Observed-information standard errors from a central-difference Hessian
/// of the negative log-likelihood at the estimate (d held fixed). Boundary
/// parameters are excluded and flagged. Fills se, z and p_value in place.
void compute_se(std::span<const Point> data, FitResult& result);

/// [M, M (1 - level)^{-1/(2m)}] where M is the largest of the 2m pooled
/// coordinates of the m points in C1, treated as U(0, d) draws.
std::pair<double, double> d_confidence_interval(std::span<const Point> c1, double level);

double aic(double loglik, int k);

struct DevianceTest {
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
  std::string diagnostic;
};

/// 2 (l_full - l_reduced) against chi-square(k_full - k_reduced).
DevianceTest deviance_test(const FitResult& full, const FitResult& reduced);

double chi_square_upper_tail(double statistic, int df);

/// Spearman rank correlation with midranks for ties.
double spearman(std::span<const Point> data);

}  // namespace mbw

#endif  // MBW_FITTING_HPP
