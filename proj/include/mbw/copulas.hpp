#ifndef MBW_COPULAS_HPP
#define MBW_COPULAS_HPP

#include <string>
#include <variant>

#include "mbw/normal.hpp"

namespace mbw {

/// Generalized Farlie-Gumbel-Morgenstern copula
///   C(u, v) = uv + rho u^b v^b (1-u)^a (1-v)^a,  a, b >= 1, |rho| <= 1.
struct GfgmParams {
  double a = 1.0;
  double b = 1.0;
  double rho = 0.0;

  void validate() const;
};

/// Bivariate Gaussian copula with latent correlation rho, |rho| < 1.
struct GaussianCopulaParams {
  double rho = 0.0;

  void validate() const;
};

using CopulaSpec = std::variant<GfgmParams, GaussianCopulaParams>;

enum class CopulaFamily { Gfgm, Gaussian };

CopulaFamily family_of(const CopulaSpec& c);
std::string family_name(CopulaFamily f);
CopulaFamily parse_family(const std::string& name);
double copula_rho(const CopulaSpec& c);
CopulaSpec with_rho(const CopulaSpec& c, double rho);
void validate(const CopulaSpec& c);

double copula_cdf(double u, double v, const CopulaSpec& c);

/// Density on the closed unit square for GFGM and the open square for the
/// Gaussian family.
double copula_density(double u, double v, const CopulaSpec& c);

/// log density taking the complements explicitly, so that margins deep in
/// the upper tail keep full precision. Defined on the closed square: edge
/// and corner values are the limits of the density (possibly +inf / -inf).
double copula_log_density(double u, double v, double one_minus_u,
                          double one_minus_v, const CopulaSpec& c);

/// As above with the complements passed as logs. Use this when the
/// complements may underflow: the Gaussian family then still sees finite
/// normal scores.
double copula_log_density_log_tails(double u, double v, double log_one_minus_u,
                                    double log_one_minus_v, const CopulaSpec& c);

/// C_u(v) = P(V <= v | U = u) = dC(u, v)/du.
double conditional_cdf(double v, double u, const CopulaSpec& c);

/// The v in [0, 1] with C_u(v) = t, to a residual of 1e-10.
double conditional_quantile(double t, double u, const CopulaSpec& c);

}  // namespace mbw

#endif  // MBW_COPULAS_HPP
