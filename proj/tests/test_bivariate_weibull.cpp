#include <doctest.h>

#include <cmath>

#include "mbw/bivariate_weibull.hpp"
#include "mbw/errors.hpp"
#include "mbw/rng.hpp"
#include "support/properties.hpp"

using namespace mbw;
using doctest::Approx;

namespace {

BivariateWeibull fgm(double rho, WeibullParams m1 = {1.0, 1.0}, WeibullParams m2 = {1.0, 1.0}) {
  return {m1, m2, GfgmParams{1.0, 1.0, rho}};
}

}  // namespace

TEST_CASE("joint cdf reference values") {
  const WeibullParams m1{2.0, 1.5}, m2{3.0, 0.7};
  CHECK(bvw_cdf(1.5, 0.7, fgm(0.0, m1, m2)) == Approx(0.3995764009).epsilon(1e-9));
  CHECK(bvw_cdf(1.5, 0.7, fgm(0.5, m1, m2)) == Approx(0.4266147936).epsilon(1e-9));
  CHECK(bvw_cdf(0.0, 0.4, fgm(0.5, m1, m2)) == 0.0);
  CHECK_THROWS_AS(bvw_cdf(-1.0, 0.4, fgm(0.5)), DomainError);
}

TEST_CASE("joint pdf reference values") {
  const WeibullParams m1{2.0, 1.5}, m2{3.0, 0.7};
  CHECK(bvw_pdf(0.9, 0.5, fgm(0.0, m1, m2)) ==
        Approx(weibull_pdf(0.9, m1) * weibull_pdf(0.5, m2)).epsilon(1e-14));
  CHECK(bvw_pdf(1.0, 1.0, fgm(0.5)) == Approx(0.1400600659).epsilon(1e-9));
  const double h = 1e-4;
  const auto m = BivariateWeibull{m1, m2, GfgmParams{2.0, 1.0, -0.6}};
  const double diff = (bvw_cdf(1.0 + h, 1.0 + h, m) - bvw_cdf(1.0 + h, 1.0 - h, m) -
                       bvw_cdf(1.0 - h, 1.0 + h, m) + bvw_cdf(1.0 - h, 1.0 - h, m)) /
                      (4.0 * h * h);
  CHECK(std::abs(diff - bvw_pdf(1.0, 1.0, m)) < 1e-5);
  CHECK_THROWS_AS(bvw_pdf(0.0, 1.0, fgm(0.5, {0.5, 1.0})), SingularityError);
}

TEST_CASE("joint survival reference values") {
  const WeibullParams m1{2.0, 1.5}, m2{3.0, 0.7};
  CHECK(bvw_survival(0.0, 0.0, fgm(0.5, m1, m2)) == 1.0);
  CHECK(bvw_survival(1.5, 0.7, fgm(0.5, m1, m2)) == Approx(0.1623736759).epsilon(1e-9));
  const double x = 0.8, y = 0.3;
  CHECK(bvw_survival(x, y, fgm(0.0, m1, m2)) ==
        Approx(weibull_survival(x, m1) * weibull_survival(y, m2)).epsilon(1e-14));
}

TEST_CASE("joint hazard reference values") {
  for (double x : {0.1, 0.7, 2.0}) {
    CHECK(bvw_hazard(x, 0.4, fgm(0.0)) == Approx(1.0).epsilon(1e-12));
  }
  const double rho = 0.4;
  const auto m = fgm(rho, {1.0, 2.0}, {1.0, 0.5});
  CHECK(bvw_hazard(0.0, 0.0, m) == Approx((1.0 + rho) / (2.0 * 0.5)).epsilon(1e-14));
  // Log-space evaluation keeps the far tail finite: h tends to 1 / (beta1 beta2).
  CHECK(bvw_hazard(1e6, 1e6, m) == Approx(1.0).epsilon(1e-9));
  const BivariateWeibull gauss{{1.0, 2.0}, {1.0, 0.5}, GaussianCopulaParams{0.5}};
  CHECK_THROWS_AS(bvw_hazard(1e6, 1e6, gauss), OverflowError);
}

TEST_CASE("hazard times survival equals density at random points") {
  RandomStream rng({3, 3});
  for (int k = 0; k < 100; ++k) {
    const BivariateWeibull m{{0.6 + 3.0 * rng.uniform(), 0.5 + rng.uniform()},
                             {0.6 + 3.0 * rng.uniform(), 0.5 + rng.uniform()},
                             k % 2 ? CopulaSpec{GfgmParams{1.0 + rng.uniform(), 1.0, 0.9}}
                                   : CopulaSpec{GaussianCopulaParams{-0.4}}};
    const double x = 2.0 * rng.uniform(), y = 2.0 * rng.uniform();
    const double f = bvw_pdf(x, y, m);
    CHECK(std::abs(bvw_hazard(x, y, m) * bvw_survival(x, y, m) - f) <= 1e-12 * std::max(1.0, f));
  }
}

TEST_CASE("margins are recovered from the joint cdf") {
  for (const auto& c : testing::copula_sweep()) {
    const BivariateWeibull m{{2.0, 1.5}, {0.8, 3.0}, c};
    for (int i = 1; i <= 50; ++i) {
      const double x = 0.1 * i;
      CHECK(std::abs(bvw_cdf(x, 1e4, m) - weibull_cdf(x, m.margin1)) < 1e-10);
      CHECK(std::abs(bvw_cdf(1e4, x, m) - weibull_cdf(x, m.margin2)) < 1e-10);
    }
  }
}

TEST_CASE("joint density normalises over a parameter sweep") {
  for (double alpha : {0.8, 1.0, 2.0, 4.0}) {
    for (double rho : {-0.9, 0.0, 0.9}) {
      for (const CopulaSpec c : {CopulaSpec{GfgmParams{1.0, 1.0, rho}},
                                 CopulaSpec{GaussianCopulaParams{rho}}}) {
        const BivariateWeibull m{{alpha, 1.0}, {alpha, 2.0}, c};
        // Midpoint rule in s = sqrt(x) to soften the shape < 1 singularity.
        // The box reaches far enough that the truncated tail is below 1e-6.
        const int n = 400;
        const double sx = std::sqrt(40.0), sy = std::sqrt(80.0);
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j) {
            const double s = (i + 0.5) * sx / n, t = (j + 0.5) * sy / n;
            total += bvw_pdf(s * s, t * t, m) * 4.0 * s * t;
          }
        }
        total *= (sx / n) * (sy / n);
        CHECK(std::abs(total - 1.0) < 1e-3);
      }
    }
  }
  const auto q = testing::joint_density_integrates_to_one();
  CHECK_MESSAGE(q.ok, q.detail);
}

TEST_CASE("closed forms agree with the generic composition") {
  const auto pdf = testing::closed_form_pdf_matches_composition();
  CHECK_MESSAGE(pdf.ok, pdf.detail);
  const auto surv = testing::closed_form_survival_matches_sklar();
  CHECK_MESSAGE(surv.ok, surv.detail);
}

TEST_CASE("abcd terms") {
  const BivariateWeibull m{{2.0, 1.5}, {3.0, 0.7}, GfgmParams{1.0, 1.0, 0.5}};
  const AbcdTerms t = abcd_terms(0.9, 0.4, m);
  CHECK(t.A == Approx(std::pow(0.9 / 1.5, 2.0)));
  CHECK(t.B == Approx(std::pow(0.4 / 0.7, 3.0)));
  CHECK(t.C == t.A + t.B);
}
