#include "mbw/fitting.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "mbw/errors.hpp"

namespace mbw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBoundaryTol = 1e-3;
constexpr double kGaussianRhoScale = 1.0 - 1e-8;

// Per-point log marginal density and the copula arguments for one margin.
struct MarginTerms {
  double log_pdf;
  double cdf;
  double log_survival;
};

MarginTerms margin_terms(double x, const WeibullParams& p) {
  if (x == 0.0) {
    if (p.shape < 1.0) {
      throw SingularityError("zero observation with Weibull shape < 1");
    }
    return {p.shape == 1.0 ? -std::log(p.scale) : -kInf, 0.0, 0.0};
  }
  const double lz = std::log(x / p.scale);
  const double a = std::exp(p.shape * lz);
  return {std::log(p.shape / p.scale) + (p.shape - 1.0) * lz - a, -std::expm1(-a), -a};
}

double log_f_xy(const Point& pt, const BivariateWeibull& m) {
  const MarginTerms mx = margin_terms(pt.x, m.margin1);
  const MarginTerms my = margin_terms(pt.y, m.margin2);
  if (mx.log_pdf == -kInf || my.log_pdf == -kInf) {
    return -kInf;
  }
  return mx.log_pdf + my.log_pdf +
         copula_log_density_log_tails(mx.cdf, my.cdf, mx.log_survival, my.log_survival,
                                      m.copula);
}

struct ZeroCoordinates {
  bool x = false;
  bool y = false;
};

ZeroCoordinates zero_coordinates(std::span<const Point> data) {
  ZeroCoordinates z;
  for (const auto& p : data) {
    z.x = z.x || p.x == 0.0;
    z.y = z.y || p.y == 0.0;
  }
  return z;
}

// Shapes below 1 put an infinite density on an axis that holds data.
bool shapes_feasible(const BivariateWeibull& m, ZeroCoordinates z) {
  return !(z.x && m.margin1.shape < 1.0) && !(z.y && m.margin2.shape < 1.0);
}

void require_nonnegative_data(std::span<const Point> data) {
  for (const auto& p : data) {
    if (!(p.x >= 0.0) || !(p.y >= 0.0) || !std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw DomainError("observations must be finite and nonnegative");
    }
  }
}

Point marginal_means(std::span<const Point> data) {
  Point s;
  for (const auto& p : data) {
    s.x += p.x;
    s.y += p.y;
  }
  const auto n = static_cast<double>(data.size());
  return {s.x / n, s.y / n};
}

std::vector<double> midranks(std::vector<double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) {
      ++j;
    }
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) {
      ranks[idx[k]] = r;
    }
    i = j + 1;
  }
  return ranks;
}

double wald_p_value(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

ParamEstimate estimate_named(std::string name, double value) {
  ParamEstimate e;
  e.name = std::move(name);
  e.estimate = value;
  return e;
}

// The free parameters of a fitted model in natural units, and how to turn
// them back into a log-likelihood.
struct ModelSurface {
  std::vector<std::string> names;
  std::vector<double> values;
  std::function<double(const std::vector<double>&)> loglik;
};

ModelSurface surface_of(std::span<const Point> data, const FitResult& r) {
  ModelSurface s;
  const MbwParams base = r.estimates;
  switch (r.model) {
    case ModelKind::M1:
      s.names = {"beta1", "beta2"};
      s.values = {base.base.margin1.scale, base.base.margin2.scale};
      s.loglik = [data, base](const std::vector<double>& v) {
        BivariateWeibull m = base.base;
        m.margin1.scale = v[0];
        m.margin2.scale = v[1];
        return loglik_bvw(data, m);
      };
      break;
    case ModelKind::M2:
      s.names = {"beta1", "beta2", "rho"};
      s.values = {base.base.margin1.scale, base.base.margin2.scale,
                  copula_rho(base.base.copula)};
      s.loglik = [data, base](const std::vector<double>& v) {
        BivariateWeibull m = base.base;
        m.margin1.scale = v[0];
        m.margin2.scale = v[1];
        m.copula = with_rho(m.copula, v[2]);
        return loglik_bvw(data, m);
      };
      break;
    case ModelKind::M3:
      s.names = {"alpha1", "beta1", "alpha2", "beta2", "rho", "p"};
      s.values = {base.base.margin1.shape, base.base.margin1.scale,
                  base.base.margin2.shape, base.base.margin2.scale,
                  copula_rho(base.base.copula),   base.p};
      s.loglik = [data, base](const std::vector<double>& v) {
        MbwParams m = base;
        m.base.margin1 = {v[0], v[1]};
        m.base.margin2 = {v[2], v[3]};
        m.base.copula = with_rho(m.base.copula, v[4]);
        m.p = v[5];
        return loglik_mbw(data, m);
      };
      break;
  }
  return s;
}

std::vector<std::string> boundary_params(const FitResult& r, ZeroCoordinates zeros) {
  std::vector<std::string> out;
  const auto& b = r.estimates.base;
  if (r.model == ModelKind::M3) {
    if (zeros.x && b.margin1.shape - 1.0 < kBoundaryTol) {
      out.emplace_back("alpha1");
    }
    if (zeros.y && b.margin2.shape - 1.0 < kBoundaryTol) {
      out.emplace_back("alpha2");
    }
  }
  if (r.model != ModelKind::M1 && 1.0 - std::abs(copula_rho(b.copula)) < kBoundaryTol) {
    out.emplace_back("rho");
  }
  if (r.model == ModelKind::M3 &&
      (r.estimates.p < kBoundaryTol || r.estimates.p > 1.0 - kBoundaryTol)) {
    out.emplace_back("p");
  }
  return out;
}

void apply_boundary_flags(FitResult& r, ZeroCoordinates zeros) {
  r.convergence.boundary = boundary_params(r, zeros);
  for (auto& p : r.params) {
    p.at_boundary = std::find(r.convergence.boundary.begin(), r.convergence.boundary.end(),
                              p.name) != r.convergence.boundary.end();
  }
}

}  // namespace

std::string model_name(ModelKind m) {
  switch (m) {
    case ModelKind::M1:
      return "m1";
    case ModelKind::M2:
      return "m2";
    case ModelKind::M3:
      return "m3";
  }
  return "m3";
}

ModelKind parse_model(const std::string& name) {
  if (name == "m1" || name == "M1") {
    return ModelKind::M1;
  }
  if (name == "m2" || name == "M2") {
    return ModelKind::M2;
  }
  if (name == "m3" || name == "M3") {
    return ModelKind::M3;
  }
  throw DomainError("unknown model '" + name + "'");
}

const ParamEstimate& FitResult::param(std::string_view name) const {
  for (const auto& p : params) {
    if (p.name == name) {
      return p;
    }
  }
  throw DomainError("fit result has no parameter '" + std::string(name) + "'");
}

double ParamTransform::to_unconstrained(double value) const {
  switch (kind_) {
    case Kind::Log:
      return std::log(value);
    case Kind::ScaledTanh:
      return std::atanh(value / c_);
    case Kind::Logit:
      return std::log(value) - std::log1p(-value);
  }
  return value;
}

double ParamTransform::to_constrained(double z) const {
  switch (kind_) {
    case Kind::Log:
      return std::exp(z);
    case Kind::ScaledTanh:
      return c_ * std::tanh(z);
    case Kind::Logit:
      return 1.0 / (1.0 + std::exp(-z));
  }
  return z;
}

double loglik_bvw(std::span<const Point> data, const BivariateWeibull& m) {
  m.validate();
  double total = 0.0;
  for (const auto& pt : data) {
    total += log_f_xy(pt, m);
  }
  return total;
}

double loglik_mbw(std::span<const Point> data, const MbwParams& m) {
  if (data.empty()) {
    throw DomainError("loglik_mbw: empty data");
  }
  m.validate();
  const double log_q = std::log1p(-m.p);
  const double log_uniform = std::log(m.p) - 2.0 * std::log(m.rect.d);
  double total = 0.0;
  for (const auto& pt : data) {
    const double lf = log_q + log_f_xy(pt, m.base);
    if (m.rect.contains(pt.x, pt.y)) {
      // log(p/d^2 + q f) without overflow in either term.
      const double hi = std::max(log_uniform, lf);
      const double lo = std::min(log_uniform, lf);
      total += lo == -kInf ? hi : hi + std::log1p(std::exp(lo - hi));
    } else {
      total += lf;
    }
  }
  return total;
}

DEstimate estimate_d(std::span<const Point> data, std::size_t min_pts,
                     std::optional<double> eps) {
  DEstimate out;
  out.dbscan.min_pts = min_pts;
  out.dbscan.eps = eps ? *eps : select_eps(data, min_pts);
  const ClusterLabels labels = dbscan(data, out.dbscan);
  out.cluster = origin_cluster(data, labels);
  for (const auto& p : out.cluster.members) {
    out.d_hat = std::max({out.d_hat, p.x, p.y});
  }
  if (!(out.d_hat > 0.0)) {
    throw DegenerateError("estimate_d: origin cluster has no positive coordinate");
  }
  return out;
}

double spearman(std::span<const Point> data) {
  if (data.size() < 2) {
    return 0.0;
  }
  std::vector<double> xs, ys;
  xs.reserve(data.size());
  ys.reserve(data.size());
  for (const auto& p : data) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  const auto rx = midranks(std::move(xs));
  const auto ry = midranks(std::move(ys));
  const double mean = (static_cast<double>(data.size()) + 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mean) * (ry[i] - mean);
    sxx += (rx[i] - mean) * (rx[i] - mean);
    syy += (ry[i] - mean) * (ry[i] - mean);
  }
  return sxx > 0.0 && syy > 0.0 ? sxy / std::sqrt(sxx * syy) : 0.0;
}

FitResult fit_m1(std::span<const Point> data) {
  if (data.empty()) {
    throw DomainError("fit_m1: empty data");
  }
  require_nonnegative_data(data);
  const Point mean = marginal_means(data);
  if (!(mean.x > 0.0) || !(mean.y > 0.0)) {
    throw DegenerateError("fit_m1: a margin has zero mean");
  }
  const auto n = static_cast<double>(data.size());
  FitResult r;
  r.model = ModelKind::M1;
  r.family = CopulaFamily::Gfgm;
  r.n = data.size();
  r.k = 2;
  r.estimates.base = {{1.0, mean.x}, {1.0, mean.y}, GfgmParams{1.0, 1.0, 0.0}};
  r.loglik = -n * (std::log(mean.x) + 1.0) - n * (std::log(mean.y) + 1.0);
  r.aic = aic(r.loglik, r.k);
  for (auto [name, value] : {std::pair{"beta1", mean.x}, std::pair{"beta2", mean.y}}) {
    ParamEstimate e = estimate_named(name, value);
    e.se = value / std::sqrt(n);
    e.z = value / *e.se;
    e.p_value = wald_p_value(*e.z);
    r.params.push_back(e);
  }
  r.convergence.converged = true;
  r.convergence.message = "closed form";
  return r;
}

FitResult fit_m2(std::span<const Point> data, const NelderMeadOptions& opt,
                 std::optional<double> fix_rho) {
  if (data.empty()) {
    throw DomainError("fit_m2: empty data");
  }
  require_nonnegative_data(data);
  const Point mean = marginal_means(data);
  if (!(mean.x > 0.0) || !(mean.y > 0.0)) {
    throw DegenerateError("fit_m2: a margin has zero mean");
  }
  const auto t_beta = ParamTransform::log();
  const auto t_rho = ParamTransform::scaled_tanh(1.0);
  auto model_at = [&](std::span<const double> z) {
    const double rho = fix_rho ? *fix_rho : t_rho.to_constrained(z[2]);
    return BivariateWeibull{{1.0, t_beta.to_constrained(z[0])},
                            {1.0, t_beta.to_constrained(z[1])},
                            GfgmParams{1.0, 1.0, rho}};
  };
  auto objective = [&](std::span<const double> z) { return -loglik_bvw(data, model_at(z)); };

  std::vector<double> start = {t_beta.to_unconstrained(mean.x),
                               t_beta.to_unconstrained(mean.y)};
  if (!fix_rho) {
    start.push_back(t_rho.to_unconstrained(std::clamp(spearman(data), -0.95, 0.95)));
  }
  const NelderMeadResult nm = nelder_mead(objective, start, opt);

  FitResult r;
  r.model = ModelKind::M2;
  r.family = CopulaFamily::Gfgm;
  r.n = data.size();
  r.k = fix_rho ? 2 : 3;
  r.estimates.base = model_at(nm.x);
  r.loglik = loglik_bvw(data, r.estimates.base);
  r.aic = aic(r.loglik, r.k);
  r.params = {estimate_named("beta1", r.estimates.base.margin1.scale),
              estimate_named("beta2", r.estimates.base.margin2.scale),
              estimate_named("rho", copula_rho(r.estimates.base.copula))};
  r.params.back().fixed = fix_rho.has_value();
  r.convergence = {nm.converged, nm.iterations, nm.evaluations, nm.restarts, {}, ""};
  apply_boundary_flags(r, zero_coordinates(data));
  r.convergence.message = nm.converged ? "simplex spread below tolerance"
                                       : "evaluation budget exhausted";
  return r;
}

FitResult fit_mbw(std::span<const Point> data, const FitConfig& config) {
  if (data.size() < kMinFitSize) {
    throw DomainError("fit_mbw: need at least " + std::to_string(kMinFitSize) +
                      " observations");
  }
  require_nonnegative_data(data);
  const DEstimate stage1 = estimate_d(data, config.min_pts, config.eps);

  // Starting values come from the bulk (everything outside C1).
  std::vector<Point> bulk;
  {
    std::vector<bool> in_c1(data.size(), false);
    for (std::size_t i : stage1.cluster.indices) {
      in_c1[i] = true;
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (!in_c1[i]) {
        bulk.push_back(data[i]);
      }
    }
  }
  const std::span<const Point> start_src =
      bulk.size() >= 3 ? std::span<const Point>(bulk) : data;
  const Point mean = marginal_means(start_src);
  const double rho0 = std::clamp(spearman(start_src), -0.95, 0.95);
  const double n = static_cast<double>(data.size());
  const double p0 =
      std::clamp(static_cast<double>(stage1.cluster.indices.size()) / n, 0.5 / n, 1.0 - 0.5 / n);

  CopulaSpec copula;
  double rho_scale = 1.0;
  if (config.family == CopulaFamily::Gfgm) {
    copula = GfgmParams{config.gfgm_a, config.gfgm_b, 0.0};
  } else {
    copula = GaussianCopulaParams{0.0};
    rho_scale = kGaussianRhoScale;
  }
  const auto t_pos = ParamTransform::log();
  const auto t_rho = ParamTransform::scaled_tanh(rho_scale);
  const auto t_p = ParamTransform::logit();
  const RectUniform rect{0.0, 0.0, stage1.d_hat};
  const ZeroCoordinates zeros = zero_coordinates(data);

  auto model_at = [&](std::span<const double> z) {
    MbwParams m;
    m.base.margin1 = {t_pos.to_constrained(z[0]), t_pos.to_constrained(z[1])};
    m.base.margin2 = {t_pos.to_constrained(z[2]), t_pos.to_constrained(z[3])};
    m.base.copula = with_rho(copula, t_rho.to_constrained(z[4]));
    m.rect = rect;
    m.p = t_p.to_constrained(z[5]);
    return m;
  };
  auto objective = [&](std::span<const double> z) {
    const MbwParams m = model_at(z);
    if (!shapes_feasible(m.base, zeros) || !(m.p > 0.0 && m.p < 1.0) ||
        !(m.base.margin1.scale > 0.0 && m.base.margin2.scale > 0.0) ||
        !std::isfinite(m.base.margin1.scale) || !std::isfinite(m.base.margin2.scale)) {
      return kInf;
    }
    return -loglik_mbw(data, m);
  };

  std::vector<double> start = {
      t_pos.to_unconstrained(1.5),  t_pos.to_unconstrained(mean.x),
      t_pos.to_unconstrained(1.5),  t_pos.to_unconstrained(mean.y),
      t_rho.to_unconstrained(rho0), t_p.to_unconstrained(p0)};
  if (config.start) {
    const MbwParams& s = *config.start;
    s.validate();
    start = {t_pos.to_unconstrained(s.base.margin1.shape),
             t_pos.to_unconstrained(s.base.margin1.scale),
             t_pos.to_unconstrained(s.base.margin2.shape),
             t_pos.to_unconstrained(s.base.margin2.scale),
             t_rho.to_unconstrained(std::clamp(copula_rho(s.base.copula), -0.999, 0.999)),
             t_p.to_unconstrained(s.p)};
  }
  if (!std::isfinite(objective(start))) {
    throw DegenerateError(
        "fit_mbw: log-likelihood is -inf at the starting point (zero density outside the "
        "early-failure square)");
  }
  const NelderMeadResult nm = nelder_mead(objective, start, config.optimizer);

  FitResult r;
  r.model = ModelKind::M3;
  r.family = config.family;
  r.n = data.size();
  r.k = 7;
  r.estimates = model_at(nm.x);
  r.loglik = loglik_mbw(data, r.estimates);
  r.aic = aic(r.loglik, r.k);
  const auto& b = r.estimates.base;
  r.params = {estimate_named("alpha1", b.margin1.shape), estimate_named("beta1", b.margin1.scale),
              estimate_named("alpha2", b.margin2.shape), estimate_named("beta2", b.margin2.scale),
              estimate_named("rho", copula_rho(b.copula)), estimate_named("d", stage1.d_hat),
              estimate_named("p", r.estimates.p)};
  for (auto& p : r.params) {
    p.fixed = p.name == "d";
  }
  r.dbscan = stage1.dbscan;
  r.origin_cluster = stage1.cluster.members;
  r.convergence = {nm.converged, nm.iterations, nm.evaluations, nm.restarts, {}, ""};
  apply_boundary_flags(r, zeros);
  r.convergence.message = nm.converged ? "simplex spread below tolerance"
                                       : "evaluation budget exhausted";
  return r;
}

void compute_se(std::span<const Point> data, FitResult& result) {
  const ZeroCoordinates zeros = zero_coordinates(data);
  apply_boundary_flags(result, zeros);
  const ModelSurface s = surface_of(data, result);

  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < s.names.size(); ++i) {
    const auto& pe = result.param(s.names[i]);
    if (!pe.at_boundary && !pe.fixed) {
      free.push_back(i);
    }
  }
  for (auto& p : result.params) {
    p.se.reset();
    p.z.reset();
    p.p_value.reset();
  }
  result.se_diagnostic.clear();
  if (free.empty()) {
    result.se_diagnostic = "no interior parameters";
    return;
  }

  const std::size_t k = free.size();
  std::vector<double> step(k);
  for (std::size_t a = 0; a < k; ++a) {
    step[a] = 1e-4 * std::max(std::abs(s.values[free[a]]), 1.0);
  }
  auto f_at = [&](std::size_t a, double da, std::size_t b, double db) {
    std::vector<double> v = s.values;
    v[free[a]] += da;
    v[free[b]] += db;
    return -s.loglik(v);
  };
  const double f0 = -s.loglik(s.values);
  Eigen::MatrixXd hess(k, k);
  for (std::size_t a = 0; a < k; ++a) {
    const double ha = step[a];
    hess(a, a) = (f_at(a, ha, a, 0.0) - 2.0 * f0 + f_at(a, -ha, a, 0.0)) / (ha * ha);
    for (std::size_t b = a + 1; b < k; ++b) {
      const double hb = step[b];
      const double v = (f_at(a, ha, b, hb) - f_at(a, ha, b, -hb) - f_at(a, -ha, b, hb) +
                        f_at(a, -ha, b, -hb)) /
                       (4.0 * ha * hb);
      hess(a, b) = v;
      hess(b, a) = v;
    }
  }
  if (!hess.allFinite()) {
    result.se_diagnostic = "Hessian has non-finite entries";
    return;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(hess);
  if (llt.info() != Eigen::Success) {
    result.se_diagnostic = "Hessian is not positive definite";
    return;
  }
  const Eigen::MatrixXd cov = llt.solve(Eigen::MatrixXd::Identity(k, k));
  for (std::size_t a = 0; a < k; ++a) {
    for (auto& p : result.params) {
      if (p.name == s.names[free[a]]) {
        p.se = std::sqrt(cov(a, a));
        p.z = p.estimate / *p.se;
        p.p_value = wald_p_value(*p.z);
      }
    }
  }
}

std::pair<double, double> d_confidence_interval(std::span<const Point> c1, double level) {
  if (c1.empty()) {
    throw DomainError("d_confidence_interval: empty cluster");
  }
  if (!(level > 0.0 && level < 1.0)) {
    throw DomainError("d_confidence_interval: level must lie in (0, 1)");
  }
  double m = 0.0;
  for (const auto& p : c1) {
    m = std::max({m, p.x, p.y});
  }
  if (!(m > 0.0)) {
    throw DegenerateError("d_confidence_interval: largest coordinate is zero");
  }
  const double pooled = 2.0 * static_cast<double>(c1.size());
  return {m, m * std::pow(1.0 - level, -1.0 / pooled)};
}

double aic(double loglik, int k) {
  if (k < 1) {
    throw DomainError("aic: k must be at least 1");
  }
  return 2.0 * k - 2.0 * loglik;
}

double chi_square_upper_tail(double statistic, int df) {
  if (df < 1) {
    throw DomainError("chi-square degrees of freedom must be positive");
  }
  if (statistic <= 0.0) {
    return 1.0;
  }
  return boost::math::gamma_q(0.5 * df, 0.5 * statistic);
}

DevianceTest deviance_test(const FitResult& full, const FitResult& reduced) {
  if (!(reduced.k < full.k)) {
    throw DomainError("deviance_test: reduced model must have fewer parameters");
  }
  DevianceTest t;
  t.statistic = 2.0 * (full.loglik - reduced.loglik);
  t.df = full.k - reduced.k;
  if (t.statistic < 0.0) {
    t.diagnostic = "negative statistic: models are not nested or a fit misconverged";
    t.p_value = 1.0;
    return t;
  }
  t.p_value = chi_square_upper_tail(t.statistic, t.df);
  if (full.model == ModelKind::M3 && reduced.model == ModelKind::M2) {
    t.diagnostic = "approximate: M2 is not a strict submodel of M3";
  }
  return t;
}

}  // namespace mbw
