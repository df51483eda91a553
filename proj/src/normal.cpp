#include "mbw/normal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "mbw/errors.hpp"

namespace mbw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Acklam's rational approximation, relative error 1.15e-9 before refinement.
double acklam_quantile(double u) {
  static constexpr std::array<double, 6> a = {
      -3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr std::array<double, 5> b = {
      -5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01};
  static constexpr std::array<double, 6> c = {
      -7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr std::array<double, 4> d = {
      7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (u < p_low) {
    const double q = std::sqrt(-2.0 * std::log(u));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (u <= 1.0 - p_low) {
    const double q = u - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double q = std::sqrt(-2.0 * std::log1p(-u));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

// Lower-tail quantile for u <= 0.5, refined by one Halley step.
double lower_quantile(double u) {
  if (u <= 0.0) {
    return -kInf;
  }
  double z = acklam_quantile(u);
  const double density = std_normal_pdf(z);
  if (!(density > 0.0)) {
    // Subnormal tail: the refinement would divide by an underflowed density.
    return z;
  }
  const double step = (std_normal_cdf(z) - u) / density;
  z -= step / (1.0 + 0.5 * z * step);
  return z;
}

}  // namespace

double std_normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double std_normal_quantile(double u) { return std_normal_quantile(u, 1.0 - u); }

double std_normal_quantile(double u, double one_minus_u) {
  if (std::isnan(u) || u < 0.0 || u > 1.0) {
    throw DomainError("std_normal_quantile: probability outside [0, 1]");
  }
  if (u <= 0.5) {
    return lower_quantile(u);
  }
  return -lower_quantile(one_minus_u);
}

double std_normal_log_upper_tail(double z) {
  if (z < 30.0) {
    return std::log(0.5 * std::erfc(z / std::numbers::sqrt2));
  }
  // Mills ratio series; the omitted terms are below 1e-13 at z = 30.
  const double r = 1.0 / (z * z);
  const double series = 1.0 - r * (1.0 - r * (3.0 - r * (15.0 - 105.0 * r)));
  return -0.5 * z * z - 0.5 * std::log(2.0 * std::numbers::pi) - std::log(z) +
         std::log(series);
}

double std_normal_upper_quantile_log(double log_q) {
  if (std::isnan(log_q) || log_q > 0.0) {
    throw DomainError("std_normal_upper_quantile_log: log probability must be <= 0");
  }
  if (log_q == -kInf) {
    return kInf;
  }
  if (log_q > -700.0) {
    const double q = std::exp(log_q);
    return std_normal_quantile(1.0 - q, q);
  }
  // Newton on log P(Z > z) from the leading-order asymptotic root.
  const double two_l = -2.0 * log_q;
  double z = std::sqrt(two_l - std::log(2.0 * std::numbers::pi * two_l));
  for (int it = 0; it < 50; ++it) {
    const double lt = std_normal_log_upper_tail(z);
    const double slope = -std::exp(-0.5 * z * z - 0.5 * std::log(2.0 * std::numbers::pi) - lt);
    const double step = (lt - log_q) / slope;
    z -= step;
    if (std::abs(step) <= 1e-15 * z) {
      break;
    }
  }
  return z;
}

double std_bivariate_normal_cdf(double z1, double z2, double rho) {
  if (!(std::abs(rho) < 1.0)) {
    throw DomainError("bivariate normal correlation must satisfy |rho| < 1");
  }
  // Upper orthant P(X > h, Y > k) with h = -z1, k = -z2.
  double h = -z1;
  double k = -z2;
  if (h == kInf || k == kInf) {
    return 0.0;
  }
  if (h == -kInf) {
    return k == -kInf ? 1.0 : std_normal_cdf(-k);
  }
  if (k == -kInf) {
    return std_normal_cdf(-h);
  }
  if (rho == 0.0) {
    return std_normal_cdf(-h) * std_normal_cdf(-k);
  }

  static constexpr std::array<double, 3> w6 = {0.1713244923791705, 0.3607615730481384,
                                               0.4679139345726904};
  static constexpr std::array<double, 3> x6 = {0.9324695142031522, 0.6612093864662647,
                                               0.2386191860831970};
  static constexpr std::array<double, 6> w12 = {
      0.04717533638651177, 0.1069393259953183, 0.1600783285433464,
      0.2031674267230659,  0.2334925365383547, 0.2491470458134029};
  static constexpr std::array<double, 6> x12 = {
      0.9815606342467191, 0.9041172563704750, 0.7699026741943050,
      0.5873179542866171, 0.3678314989981802, 0.1252334085114692};
  static constexpr std::array<double, 10> w20 = {
      0.01761400713915212, 0.04060142980038694, 0.06267204833410906,
      0.08327674157670475, 0.1019301198172404,  0.1181945319615184,
      0.1316886384491766,  0.1420961093183821,  0.1491729864726037,
      0.1527533871307259};
  static constexpr std::array<double, 10> x20 = {
      0.9931285991850949, 0.9639719272779138, 0.9122344282513259,
      0.8391169718222188, 0.7463319064601508, 0.6360536807265150,
      0.5108670019508271, 0.3737060887154196, 0.2277858511416451,
      0.07652652113349733};

  const double* w = nullptr;
  const double* x = nullptr;
  int ng = 0;
  const double ar = std::abs(rho);
  if (ar < 0.3) {
    w = w6.data(), x = x6.data(), ng = 3;
  } else if (ar < 0.75) {
    w = w12.data(), x = x12.data(), ng = 6;
  } else {
    w = w20.data(), x = x20.data(), ng = 10;
  }

  constexpr double tp = 2.0 * std::numbers::pi;
  double hk = h * k;
  double bvn = 0.0;

  if (ar < 0.925) {
    const double hs = (h * h + k * k) / 2.0;
    const double asr = std::asin(rho) / 2.0;
    for (int i = 0; i < ng; ++i) {
      for (double sign : {-1.0, 1.0}) {
        const double sn = std::sin(asr * (1.0 + sign * x[i]));
        bvn += w[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
      }
    }
    bvn = bvn * asr / tp + std_normal_cdf(-h) * std_normal_cdf(-k);
  } else {
    if (rho < 0.0) {
      k = -k;
      hk = -hk;
    }
    const double as = (1.0 - rho) * (1.0 + rho);
    double a = std::sqrt(as);
    const double bs = (h - k) * (h - k);
    const double c = (4.0 - hk) / 8.0;
    const double d = (12.0 - hk) / 80.0;
    double asr = -(bs / as + hk) / 2.0;
    if (asr > -100.0) {
      bvn = a * std::exp(asr) *
            (1.0 - c * (bs - as) * (1.0 - d * bs) / 3.0 + c * d * as * as);
    }
    if (hk > -100.0) {
      const double b = std::sqrt(bs);
      const double sp = std::sqrt(tp) * std_normal_cdf(-b / a);
      bvn -= std::exp(-hk / 2.0) * sp * b * (1.0 - c * bs * (1.0 - d * bs) / 3.0);
    }
    a /= 2.0;
    double sum = 0.0;
    for (int i = 0; i < ng; ++i) {
      for (double sign : {-1.0, 1.0}) {
        const double xs = std::pow(a * (1.0 + sign * x[i]), 2);
        asr = -(bs / xs + hk) / 2.0;
        if (asr > -100.0) {
          const double sp = 1.0 + c * xs * (1.0 + 5.0 * d * xs);
          const double rs = std::sqrt(1.0 - xs);
          const double ep = std::exp(-(hk / 2.0) * xs / ((1.0 + rs) * (1.0 + rs))) / rs;
          sum += w[i] * std::exp(asr) * (sp - ep);
        }
      }
    }
    bvn = (a * sum - bvn) / tp;
    if (rho > 0.0) {
      bvn += std_normal_cdf(-std::max(h, k));
    } else if (h >= k) {
      bvn = -bvn;
    } else {
      const double l = h < 0.0 ? std_normal_cdf(k) - std_normal_cdf(h)
                               : std_normal_cdf(-h) - std_normal_cdf(-k);
      bvn = l - bvn;
    }
  }
  return std::clamp(bvn, 0.0, 1.0);
}

}  // namespace mbw
