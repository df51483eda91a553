#include "mbw/univariate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mbw/errors.hpp"

namespace mbw {

namespace {

void require_nonnegative(double x, const char* what) {
  if (!(x >= 0.0)) {
    throw DomainError(std::string(what) + ": argument must be >= 0, got " +
                      std::to_string(x));
  }
}

}  // namespace

void WeibullParams::validate() const {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw DomainError("Weibull shape must be positive and finite");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw DomainError("Weibull scale must be positive and finite");
  }
}

void RectUniform::validate() const {
  if (!(d > 0.0) || !std::isfinite(d)) {
    throw DomainError("rectangle side d must be positive and finite");
  }
  if (!(x0 >= 0.0) || !(y0 >= 0.0)) {
    throw DomainError("rectangle anchor must be nonnegative");
  }
}

double weibull_exponent(double x, const WeibullParams& p) {
  return std::pow(x / p.scale, p.shape);
}

double weibull_cdf(double x, const WeibullParams& p) {
  p.validate();
  require_nonnegative(x, "weibull_cdf");
  return -std::expm1(-weibull_exponent(x, p));
}

double weibull_survival(double x, const WeibullParams& p) {
  p.validate();
  require_nonnegative(x, "weibull_survival");
  return std::exp(-weibull_exponent(x, p));
}

double weibull_log_pdf(double x, const WeibullParams& p) {
  p.validate();
  require_nonnegative(x, "weibull_pdf");
  if (x == 0.0) {
    if (p.shape < 1.0) {
      throw SingularityError("Weibull density is infinite at x = 0 for shape < 1");
    }
    if (p.shape == 1.0) {
      return -std::log(p.scale);
    }
    return -std::numeric_limits<double>::infinity();
  }
  const double z = x / p.scale;
  return std::log(p.shape / p.scale) + (p.shape - 1.0) * std::log(z) -
         std::pow(z, p.shape);
}

double weibull_pdf(double x, const WeibullParams& p) {
  return std::exp(weibull_log_pdf(x, p));
}

double weibull_quantile(double u, const WeibullParams& p) {
  p.validate();
  if (!(u >= 0.0 && u < 1.0)) {
    throw DomainError("weibull_quantile: u must lie in [0, 1)");
  }
  return p.scale * std::pow(-std::log1p(-u), 1.0 / p.shape);
}

double rect_pdf(double x, double y, const RectUniform& r) {
  r.validate();
  return r.contains(x, y) ? 1.0 / (r.d * r.d) : 0.0;
}

double rect_cdf(double x, double y, const RectUniform& r) {
  r.validate();
  const double fx = std::clamp((x - r.x0) / r.d, 0.0, 1.0);
  const double fy = std::clamp((y - r.y0) / r.d, 0.0, 1.0);
  return fx * fy;
}

double rect_survival(double x, double y, const RectUniform& r) {
  r.validate();
  const double x1 = r.x0 + r.d;
  const double y1 = r.y0 + r.d;
  if (x >= x1 || y >= y1) {
    return 0.0;
  }
  if (x <= r.x0 && y <= r.y0) {
    return 1.0;
  }
  if (y <= r.y0) {
    return (x1 - x) / r.d;
  }
  if (x <= r.x0) {
    return (y1 - y) / r.d;
  }
  return (x1 - x) * (y1 - y) / (r.d * r.d);
}

double rect_hazard(double x, double y, const RectUniform& r) {
  r.validate();
  const double x1 = r.x0 + r.d;
  const double y1 = r.y0 + r.d;
  if (x >= x1 || y >= y1) {
    return std::numeric_limits<double>::infinity();
  }
  if (x >= r.x0 && y >= r.y0) {
    return 1.0 / ((x1 - x) * (y1 - y));
  }
  return 0.0;
}

}  // namespace mbw
