#include "mbw/bivariate_weibull.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mbw/errors.hpp"

namespace mbw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_nonnegative(double x, double y, const char* what) {
  if (!(x >= 0.0) || !(y >= 0.0)) {
    throw DomainError(std::string(what) + ": coordinates must be >= 0");
  }
}

const GfgmParams& require_gfgm(const BivariateWeibull& m, const char* what) {
  const auto* g = std::get_if<GfgmParams>(&m.copula);
  if (g == nullptr) {
    throw DomainError(std::string(what) + " requires the GFGM copula");
  }
  return *g;
}

// log of (alpha/beta) A^{1 - 1/alpha}, the non-exponential part of f_X.
double log_margin_prefactor(double a_term, const WeibullParams& p) {
  if (a_term == 0.0) {
    if (p.shape < 1.0) {
      throw SingularityError("Weibull density is infinite at 0 for shape < 1");
    }
    return p.shape == 1.0 ? -std::log(p.scale) : -kInf;
  }
  return std::log(p.shape / p.scale) + (1.0 - 1.0 / p.shape) * std::log(a_term);
}

}  // namespace

void BivariateWeibull::validate() const {
  margin1.validate();
  margin2.validate();
  mbw::validate(copula);
}

AbcdTerms abcd_terms(double x, double y, const BivariateWeibull& m) {
  const auto& g = require_gfgm(m, "abcd_terms");
  AbcdTerms t;
  t.A = weibull_exponent(x, m.margin1);
  t.B = weibull_exponent(y, m.margin2);
  t.C = t.A + t.B;
  t.D = std::exp(-(g.a - 1.0) * t.C) * ((g.a + g.b) * std::exp(-t.A) - g.a) *
        ((g.a + g.b) * std::exp(-t.B) - g.a);
  return t;
}

double bvw_cdf(double x, double y, const BivariateWeibull& m) {
  require_nonnegative(x, y, "bvw_cdf");
  m.validate();
  const double u = weibull_cdf(x, m.margin1);
  const double v = weibull_cdf(y, m.margin2);
  if (const auto* g = std::get_if<GaussianCopulaParams>(&m.copula)) {
    if (u == 0.0 || v == 0.0) {
      return 0.0;
    }
    const double zu = std_normal_quantile(u, weibull_survival(x, m.margin1));
    const double zv = std_normal_quantile(v, weibull_survival(y, m.margin2));
    return std_bivariate_normal_cdf(zu, zv, g->rho);
  }
  return copula_cdf(u, v, m.copula);
}

double bvw_log_pdf(double x, double y, const BivariateWeibull& m, PdfPath path) {
  require_nonnegative(x, y, "bvw_pdf");
  m.validate();
  if (path == PdfPath::Auto) {
    path = family_of(m.copula) == CopulaFamily::Gfgm ? PdfPath::ClosedForm
                                                     : PdfPath::Composition;
  }

  if (path == PdfPath::ClosedForm) {
    const auto& g = require_gfgm(m, "closed-form bvw_pdf");
    const AbcdTerms t = abcd_terms(x, y, m);
    const double lead = log_margin_prefactor(t.A, m.margin1) +
                        log_margin_prefactor(t.B, m.margin2) - t.C;
    if (lead == -kInf) {
      return -kInf;
    }
    const double bracket = 1.0 + g.rho * std::pow(-std::expm1(-t.A), g.b - 1.0) *
                                     std::pow(-std::expm1(-t.B), g.b - 1.0) * t.D;
    return lead + std::log(std::max(0.0, bracket));
  }

  const double lfx = weibull_log_pdf(x, m.margin1);
  const double lfy = weibull_log_pdf(y, m.margin2);
  if (lfx == -kInf || lfy == -kInf) {
    return -kInf;
  }
  const double u = weibull_cdf(x, m.margin1);
  const double v = weibull_cdf(y, m.margin2);
  return lfx + lfy +
         copula_log_density_log_tails(u, v, -weibull_exponent(x, m.margin1),
                                      -weibull_exponent(y, m.margin2), m.copula);
}

double bvw_pdf(double x, double y, const BivariateWeibull& m, PdfPath path) {
  return std::exp(bvw_log_pdf(x, y, m, path));
}

double bvw_log_survival(double x, double y, const BivariateWeibull& m) {
  require_nonnegative(x, y, "bvw_survival");
  m.validate();
  const double a_term = weibull_exponent(x, m.margin1);
  const double b_term = weibull_exponent(y, m.margin2);
  if (const auto* g = std::get_if<GfgmParams>(&m.copula)) {
    const double c_term = a_term + b_term;
    const double corr = g->rho * std::exp(-(g->a - 1.0) * c_term) *
                        std::pow(-std::expm1(-a_term), g->b) *
                        std::pow(-std::expm1(-b_term), g->b);
    return -c_term + std::log1p(corr);
  }
  const auto& g = std::get<GaussianCopulaParams>(m.copula);
  // P(X > x, Y > y) = P(Z1 > z_u, Z2 > z_v) = Phi2(-z_u, -z_v).
  const double su = std::exp(-a_term);
  const double sv = std::exp(-b_term);
  if (su == 0.0 || sv == 0.0) {
    return -kInf;
  }
  const double zu = std_normal_quantile(-std::expm1(-a_term), su);
  const double zv = std_normal_quantile(-std::expm1(-b_term), sv);
  return std::log(std_bivariate_normal_cdf(-zu, -zv, g.rho));
}

double bvw_survival(double x, double y, const BivariateWeibull& m) {
  return std::exp(bvw_log_survival(x, y, m));
}

double bvw_survival_sklar(double x, double y, const BivariateWeibull& m) {
  require_nonnegative(x, y, "bvw_survival_sklar");
  m.validate();
  const double u = weibull_cdf(x, m.margin1);
  const double v = weibull_cdf(y, m.margin2);
  return 1.0 - u - v + copula_cdf(u, v, m.copula);
}

double bvw_hazard(double x, double y, const BivariateWeibull& m) {
  const double log_r = bvw_log_survival(x, y, m);
  if (log_r == -kInf) {
    throw OverflowError("bvw_hazard: joint survival underflows to zero");
  }
  const double h = std::exp(bvw_log_pdf(x, y, m) - log_r);
  if (!std::isfinite(h)) {
    throw OverflowError("bvw_hazard: hazard exceeds double range");
  }
  return h;
}

}  // namespace mbw
