#ifndef MBW_NORMAL_HPP
#define MBW_NORMAL_HPP

namespace mbw {

double std_normal_pdf(double z);
double std_normal_cdf(double z);

/// Inverse of std_normal_cdf on [0, 1]; returns -inf / +inf at the ends.
double std_normal_quantile(double u);

/// Quantile computed from whichever tail is smaller, so that values of u
/// close to 1 keep their precision when the complement is known exactly.
double std_normal_quantile(double u, double one_minus_u);

/// log P(Z > z). Stays finite far beyond the point where the tail
/// probability underflows.
double std_normal_log_upper_tail(double z);

/// The z with log P(Z > z) = log_q, for log_q <= 0. Accepts tail
/// probabilities too small to represent as doubles.
double std_normal_upper_quantile_log(double log_q);

/// P(Z1 <= z1, Z2 <= z2) for a standard bivariate normal with correlation
/// rho, |rho| < 1. Genz's adaptation of the Drezner-Wesolowsky method.
double std_bivariate_normal_cdf(double z1, double z2, double rho);

}  // namespace mbw

#endif  // MBW_NORMAL_HPP
