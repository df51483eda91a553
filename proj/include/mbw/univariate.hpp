#ifndef MBW_UNIVARIATE_HPP
#define MBW_UNIVARIATE_HPP

namespace mbw {

/// Two-parameter Weibull margin: F(x) = 1 - exp(-(x/scale)^shape).
struct WeibullParams {
  double shape = 1.0;
  double scale = 1.0;

  void validate() const;
};

/// Uniform distribution on the square [x0, x0+d] x [y0, y0+d].
struct RectUniform {
  double x0 = 0.0;
  double y0 = 0.0;
  double d = 1.0;

  void validate() const;
  bool contains(double x, double y) const {
    return x >= x0 && x <= x0 + d && y >= y0 && y <= y0 + d;
  }
};

/// (x/scale)^shape, the cumulative hazard of the margin.
double weibull_exponent(double x, const WeibullParams& p);

double weibull_cdf(double x, const WeibullParams& p);
double weibull_survival(double x, const WeibullParams& p);

/// Throws SingularityError at x = 0 when shape < 1.
double weibull_pdf(double x, const WeibullParams& p);

/// log of weibull_pdf; -inf where the density is zero.
double weibull_log_pdf(double x, const WeibullParams& p);

/// Inverse CDF for u in [0, 1).
double weibull_quantile(double u, const WeibullParams& p);

double rect_pdf(double x, double y, const RectUniform& r);

/// Product of clamped linear ramps; the joint CDF of the square.
double rect_cdf(double x, double y, const RectUniform& r);

double rect_survival(double x, double y, const RectUniform& r);

/// +inf once either coordinate reaches the far edge of the square.
double rect_hazard(double x, double y, const RectUniform& r);

}  // namespace mbw

#endif  // MBW_UNIVARIATE_HPP
