#include "mbw/copulas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mbw/errors.hpp"

namespace mbw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kResidualTol = 1e-10;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void require_unit(double u, const char* what) {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw DomainError(std::string(what) + ": argument outside [0, 1]");
  }
}

// u^{b-1} (1-u)^{a-1} (b(1-u) - a u), the factor that the GFGM density
// and the GFGM conditional distribution share.
double gfgm_shape(double u, double s, const GfgmParams& g) {
  return std::pow(u, g.b - 1.0) * std::pow(s, g.a - 1.0) * (g.b * s - g.a * u);
}

double gfgm_conditional(double v, double u, const GfgmParams& g) {
  const double s = 1.0 - u;
  const double w = 1.0 - v;
  return v + g.rho * g.b * std::pow(u, g.b - 1.0) * std::pow(v, g.b) * std::pow(s, g.a) *
                 std::pow(w, g.a) -
         g.rho * g.a * std::pow(u, g.b) * std::pow(v, g.b) * std::pow(s, g.a - 1.0) *
             std::pow(w, g.a);
}

double gfgm_density(double u, double v, double s, double w, const GfgmParams& g) {
  return 1.0 + g.rho * gfgm_shape(u, s, g) * gfgm_shape(v, w, g);
}

double gaussian_log_density(double zu, double zv, double rho) {
  const double one_m_r2 = (1.0 - rho) * (1.0 + rho);
  const double norm = -0.5 * std::log(one_m_r2);
  if (rho == 0.0) {
    return 0.0;
  }
  const bool inf_u = std::isinf(zu);
  const bool inf_v = std::isinf(zv);
  if (inf_u && inf_v) {
    // rho^2 (zu^2 + zv^2) - 2 rho zu zv grows like 2 rho (rho - s) z^2.
    const double s = (zu > 0) == (zv > 0) ? 1.0 : -1.0;
    return rho * (rho - s) < 0.0 ? kInf : -kInf;
  }
  if (inf_u || inf_v) {
    return -kInf;
  }
  const double q = rho * rho * (zu * zu + zv * zv) - 2.0 * rho * zu * zv;
  return norm - q / (2.0 * one_m_r2);
}

}  // namespace

void GfgmParams::validate() const {
  if (!(a >= 1.0) || !(b >= 1.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("GFGM copula requires a >= 1 and b >= 1");
  }
  if (!(rho >= -1.0 && rho <= 1.0)) {
    throw DomainError("GFGM copula requires -1 <= rho <= 1");
  }
}

void GaussianCopulaParams::validate() const {
  if (!(std::abs(rho) < 1.0)) {
    throw DomainError("Gaussian copula requires |rho| < 1");
  }
}

CopulaFamily family_of(const CopulaSpec& c) {
  return std::holds_alternative<GfgmParams>(c) ? CopulaFamily::Gfgm
                                               : CopulaFamily::Gaussian;
}

std::string family_name(CopulaFamily f) {
  return f == CopulaFamily::Gfgm ? "gfgm" : "gaussian";
}

CopulaFamily parse_family(const std::string& name) {
  if (name == "gfgm" || name == "fgm") {
    return CopulaFamily::Gfgm;
  }
  if (name == "gaussian") {
    return CopulaFamily::Gaussian;
  }
  throw DomainError("unknown copula family '" + name + "'");
}

double copula_rho(const CopulaSpec& c) {
  return std::visit([](const auto& p) { return p.rho; }, c);
}

CopulaSpec with_rho(const CopulaSpec& c, double rho) {
  return std::visit(
      [rho](auto p) -> CopulaSpec {
        p.rho = rho;
        return p;
      },
      c);
}

void validate(const CopulaSpec& c) {
  std::visit([](const auto& p) { p.validate(); }, c);
}

double copula_cdf(double u, double v, const CopulaSpec& c) {
  require_unit(u, "copula_cdf");
  require_unit(v, "copula_cdf");
  validate(c);
  return std::visit(
      overloaded{
          [&](const GfgmParams& g) {
            return u * v + g.rho * std::pow(u, g.b) * std::pow(v, g.b) *
                               std::pow(1.0 - u, g.a) * std::pow(1.0 - v, g.a);
          },
          [&](const GaussianCopulaParams& g) {
            if (u == 0.0 || v == 0.0) {
              return 0.0;
            }
            if (u == 1.0) {
              return v;
            }
            if (v == 1.0) {
              return u;
            }
            return std_bivariate_normal_cdf(std_normal_quantile(u),
                                            std_normal_quantile(v), g.rho);
          }},
      c);
}

double copula_density(double u, double v, const CopulaSpec& c) {
  require_unit(u, "copula_density");
  require_unit(v, "copula_density");
  if (family_of(c) == CopulaFamily::Gaussian &&
      (u == 0.0 || u == 1.0 || v == 0.0 || v == 1.0)) {
    throw DomainError("Gaussian copula density requires (u, v) in the open unit square");
  }
  return std::exp(copula_log_density(u, v, 1.0 - u, 1.0 - v, c));
}

double copula_log_density(double u, double v, double one_minus_u, double one_minus_v,
                          const CopulaSpec& c) {
  validate(c);
  return std::visit(
      overloaded{[&](const GfgmParams& g) {
                   return std::log(std::max(0.0, gfgm_density(u, v, one_minus_u, one_minus_v, g)));
                 },
                 [&](const GaussianCopulaParams& g) {
                   return gaussian_log_density(std_normal_quantile(u, one_minus_u),
                                               std_normal_quantile(v, one_minus_v),
                                               g.rho);
                 }},
      c);
}

double copula_log_density_log_tails(double u, double v, double log_one_minus_u,
                                    double log_one_minus_v, const CopulaSpec& c) {
  const auto* g = std::get_if<GaussianCopulaParams>(&c);
  if (g == nullptr) {
    return copula_log_density(u, v, std::exp(log_one_minus_u), std::exp(log_one_minus_v), c);
  }
  validate(c);
  const auto score = [](double p, double log_q) {
    return p <= 0.5 ? std_normal_quantile(p, std::exp(log_q))
                    : std_normal_upper_quantile_log(log_q);
  };
  return gaussian_log_density(score(u, log_one_minus_u), score(v, log_one_minus_v), g->rho);
}

double conditional_cdf(double v, double u, const CopulaSpec& c) {
  require_unit(v, "conditional_cdf");
  if (!(u > 0.0 && u < 1.0)) {
    throw DomainError("conditional_cdf: conditioning value u must lie in (0, 1)");
  }
  validate(c);
  return std::visit(
      overloaded{[&](const GfgmParams& g) { return gfgm_conditional(v, u, g); },
                 [&](const GaussianCopulaParams& g) {
                   if (v == 0.0 || v == 1.0) {
                     return v;
                   }
                   const double z = (std_normal_quantile(v) - g.rho * std_normal_quantile(u)) /
                                    std::sqrt((1.0 - g.rho) * (1.0 + g.rho));
                   return std_normal_cdf(z);
                 }},
      c);
}

double conditional_quantile(double t, double u, const CopulaSpec& c) {
  if (!(t > 0.0 && t < 1.0)) {
    throw DomainError("conditional_quantile: t must lie in (0, 1)");
  }
  if (!(u > 0.0 && u < 1.0)) {
    throw DomainError("conditional_quantile: u must lie in (0, 1)");
  }
  validate(c);
  if (const auto* g = std::get_if<GaussianCopulaParams>(&c)) {
    const double z = g->rho * std_normal_quantile(u) +
                     std::sqrt((1.0 - g->rho) * (1.0 + g->rho)) * std_normal_quantile(t);
    return std_normal_cdf(z);
  }

  const auto& g = std::get<GfgmParams>(c);
  constexpr double eps = 1e-14;
  constexpr int max_newton = 100;
  auto residual = [&](double v) { return gfgm_conditional(v, u, g) - t; };

  double v = t;
  for (int it = 0; it < max_newton; ++it) {
    const double r = residual(v);
    if (std::abs(r) <= 1e-13) {
      return v;
    }
    const double slope = gfgm_density(u, v, 1.0 - u, 1.0 - v, g);
    if (std::abs(slope) < eps) {
      break;
    }
    const double next = v - r / slope;
    if (!(next >= eps && next <= 1.0 - eps)) {
      break;
    }
    v = next;
  }
  if (std::abs(residual(v)) <= kResidualTol) {
    return v;
  }

  // C_u is a distribution function in v, so bisection always brackets.
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) {
      break;
    }
    (residual(mid) < 0.0 ? lo : hi) = mid;
  }
  v = std::abs(residual(lo)) < std::abs(residual(hi)) ? lo : hi;
  if (std::abs(residual(v)) > kResidualTol) {
    throw ConvergenceError("conditional_quantile: residual tolerance not met");
  }
  return v;
}

}  // namespace mbw
