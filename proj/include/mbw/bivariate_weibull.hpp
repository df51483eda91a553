#ifndef MBW_BIVARIATE_WEIBULL_HPP
#define MBW_BIVARIATE_WEIBULL_HPP

#include "mbw/copulas.hpp"
#include "mbw/univariate.hpp"

namespace mbw {

/// Weibull margins joined by a copula: F(x, y) = C(F_X(x), F_Y(y)).
struct BivariateWeibull {
  WeibullParams margin1;
  WeibullParams margin2;
  CopulaSpec copula = GfgmParams{};

  void validate() const;
};

/// Shorthand terms of the GFGM closed forms:
///   A = (x/beta1)^alpha1,  B = (y/beta2)^alpha2,  C = A + B,
///   D = exp(-(a-1)C) ((a+b)e^{-A} - a) ((a+b)e^{-B} - a).
struct AbcdTerms {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  double D = 0.0;
};

/// Requires a GFGM copula.
AbcdTerms abcd_terms(double x, double y, const BivariateWeibull& m);

/// How bvw_pdf evaluates the density. Auto picks the GFGM closed form when
/// the copula is GFGM and the generic f_X f_Y c(F_X, F_Y) composition
/// otherwise.
enum class PdfPath { Auto, ClosedForm, Composition };

double bvw_cdf(double x, double y, const BivariateWeibull& m);

double bvw_pdf(double x, double y, const BivariateWeibull& m, PdfPath path = PdfPath::Auto);

/// log of bvw_pdf; -inf where a marginal density vanishes.
double bvw_log_pdf(double x, double y, const BivariateWeibull& m,
                   PdfPath path = PdfPath::Auto);

/// Joint survival P(X > x, Y > y). GFGM uses its closed form, the Gaussian
/// copula the bivariate normal upper orthant.
double bvw_survival(double x, double y, const BivariateWeibull& m);
double bvw_log_survival(double x, double y, const BivariateWeibull& m);

/// 1 - F_X(x) - F_Y(y) + C(F_X(x), F_Y(y)) evaluated literally.
double bvw_survival_sklar(double x, double y, const BivariateWeibull& m);

/// f / R. Throws OverflowError if the survival underflows to zero.
double bvw_hazard(double x, double y, const BivariateWeibull& m);

}  // namespace mbw

#endif  // MBW_BIVARIATE_WEIBULL_HPP
