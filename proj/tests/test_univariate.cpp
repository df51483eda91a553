#include <doctest.h>

#include <cmath>

#include "mbw/errors.hpp"
#include "mbw/univariate.hpp"

using namespace mbw;
using doctest::Approx;

TEST_CASE("weibull cdf reference values") {
  const WeibullParams w{4.0, 1.5};
  CHECK(weibull_cdf(1.5, w) == Approx(1.0 - std::exp(-1.0)).epsilon(1e-15));
  CHECK(weibull_cdf(0.0, w) == 0.0);
  // Independent high-precision evaluation.
  CHECK(weibull_cdf(0.75, w) == Approx(0.0605869372).epsilon(1e-9));
}

TEST_CASE("weibull pdf reference values") {
  CHECK(weibull_pdf(0.0, {1.0, 2.0}) == Approx(0.5));
  CHECK(weibull_pdf(1.0, {1.0, 1.0}) == Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(weibull_pdf(1.0, {4.0, 1.5}) == Approx(0.648497626).epsilon(1e-9));
  CHECK(weibull_pdf(0.0, {2.0, 1.0}) == 0.0);
}

TEST_CASE("weibull quantile reference values") {
  CHECK(weibull_quantile(0.0, {2.0, 3.0}) == 0.0);
  CHECK(weibull_quantile(1.0 - std::exp(-1.0), {2.5, 3.0}) == Approx(3.0).epsilon(1e-14));
  CHECK(weibull_quantile(0.5, {1.0, 1.0}) == Approx(std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("weibull domain errors") {
  CHECK_THROWS_AS(weibull_cdf(-0.1, {1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(weibull_pdf(-0.1, {1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(weibull_pdf(0.0, {0.5, 1.0}), SingularityError);
  CHECK_THROWS_AS(weibull_quantile(1.0, {1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(weibull_quantile(-0.2, {1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(weibull_cdf(1.0, {0.0, 1.0}), DomainError);
  CHECK_THROWS_AS(weibull_cdf(1.0, {1.0, -2.0}), DomainError);
}

TEST_CASE("weibull cdf is monotone with the right limits") {
  for (double alpha : {0.5, 1.0, 2.0, 4.0}) {
    const WeibullParams w{alpha, 1.7};
    double prev = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double f = weibull_cdf(10.0 * i / 999.0, w);
      CHECK(f >= prev);
      prev = f;
    }
    CHECK(weibull_cdf(1e4 * w.scale, w) > 1.0 - 1e-8);
  }
}

TEST_CASE("weibull pdf is the derivative of the cdf") {
  for (double alpha : {0.5, 1.0, 2.0, 4.0}) {
    const WeibullParams w{alpha, 1.3};
    for (int i = 1; i <= 100; ++i) {
      const double x = 0.04 * i;
      const double h = 1e-6 * std::max(1.0, x);
      const double numeric = (weibull_cdf(x + h, w) - weibull_cdf(x - h, w)) / (2.0 * h);
      CHECK(std::abs(numeric - weibull_pdf(x, w)) < 1e-6);
    }
  }
}

TEST_CASE("weibull quantile inverts the cdf") {
  for (double alpha : {0.5, 1.0, 2.0, 4.0}) {
    const WeibullParams w{alpha, 2.2};
    for (int i = 0; i <= 200; ++i) {
      const double x = w.scale * (0.01 + (5.0 - 0.01) * i / 200.0);
      const double u = weibull_cdf(x, w);
      // Near u = 1 the inverse is ill-conditioned; stay where it is not.
      if (u > 1.0 - 1e-6) continue;
      CHECK(std::abs(weibull_quantile(u, w) - x) <= 1e-7 * std::max(1.0, x));
    }
  }
}

TEST_CASE("rectangle density") {
  CHECK(rect_pdf(0.1, 0.1, {0.0, 0.0, 0.5}) == Approx(4.0));
  CHECK(rect_pdf(0.6, 0.1, {0.0, 0.0, 0.5}) == 0.0);
  CHECK(rect_pdf(2.0, 3.0, {1.0, 2.0, 2.0}) == Approx(0.25));
  // The square is closed on every side.
  CHECK(rect_pdf(0.5, 0.5, {0.0, 0.0, 0.5}) == Approx(4.0));
  CHECK(rect_pdf(1.0, 2.0, {1.0, 2.0, 2.0}) == Approx(0.25));
  CHECK_THROWS_AS(rect_pdf(0.1, 0.1, {0.0, 0.0, 0.0}), DomainError);
}

TEST_CASE("rectangle survival branches") {
  const RectUniform r{0.0, 0.0, 1.0};
  CHECK(rect_survival(0.0, 0.0, r) == 1.0);
  CHECK(rect_survival(0.5, 0.5, r) == Approx(0.25));
  CHECK(rect_survival(1.2, 0.3, r) == 0.0);
  CHECK(rect_survival(0.3, 1.0, r) == 0.0);
  const RectUniform s{1.0, 2.0, 2.0};
  CHECK(rect_survival(0.0, 0.0, s) == 1.0);
  CHECK(rect_survival(2.0, 0.0, s) == Approx(0.5));
  CHECK(rect_survival(0.0, 3.0, s) == Approx(0.5));
  CHECK(rect_survival(2.0, 3.0, s) == Approx(0.25));
}

TEST_CASE("rectangle hazard") {
  const RectUniform r{0.0, 0.0, 1.0};
  CHECK(rect_hazard(0.0, 0.0, r) == Approx(1.0));
  CHECK(rect_hazard(0.5, 0.5, r) == Approx(4.0));
  CHECK(std::isinf(rect_hazard(2.0, 2.0, r)));
  CHECK(std::isinf(rect_hazard(1.0, 0.2, r)));
  CHECK(rect_hazard(0.5, 0.5, {1.0, 1.0, 1.0}) == 0.0);
}

TEST_CASE("rectangle hazard times survival is the density on the interior") {
  const RectUniform r{0.5, 1.0, 2.0};
  for (int i = 1; i < 20; ++i) {
    for (int j = 1; j < 20; ++j) {
      const double x = 0.5 + 0.1 * i, y = 1.0 + 0.1 * j;
      CHECK(rect_hazard(x, y, r) * rect_survival(x, y, r) == Approx(rect_pdf(x, y, r)));
    }
  }
  // Integrates to one: constant 1/d^2 over area d^2.
  CHECK(rect_pdf(1.0, 2.0, r) * r.d * r.d == Approx(1.0));
}
