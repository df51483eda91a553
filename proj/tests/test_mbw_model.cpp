#include <doctest.h>

#include <cmath>
#include <sstream>

#include "mbw/errors.hpp"
#include "mbw/mbw_model.hpp"
#include "mbw/rng.hpp"
#include "support/properties.hpp"

using namespace mbw;
using doctest::Approx;

namespace {

MbwParams study_model() {
  MbwParams m;
  m.base = {{4.0, 1.5}, {3.5, 5.0}, GaussianCopulaParams{0.6}};
  m.rect = {0.0, 0.0, 0.1};
  m.p = 0.3;
  return m;
}

MbwParams symmetric_model(double alpha, double p) {
  MbwParams m;
  m.base = {{alpha, 1.0}, {alpha, 1.0}, GfgmParams{1.0, 1.0, 0.5}};
  m.rect = {0.0, 0.0, 0.4};
  m.p = p;
  return m;
}

}  // namespace

TEST_CASE("mixture density") {
  MbwParams m = symmetric_model(2.0, 1.0 - 1e-12);
  CHECK(mbw_pdf(0.2, 0.1, m) == Approx(1.0 / 0.16).epsilon(1e-6));
  m = symmetric_model(2.0, 0.3);
  CHECK(mbw_pdf(0.9, 0.1, m) == Approx(0.7 * bvw_pdf(0.9, 0.1, m.base)).epsilon(1e-14));
  const MbwParams s = study_model();
  CHECK(mbw_pdf(0.05, 0.05, s) >= 30.0);
  CHECK(mbw_pdf(0.05, 0.05, s) == Approx(30.0 + 0.7 * bvw_pdf(0.05, 0.05, s.base)));
  CHECK_THROWS_AS(mbw_pdf(0.0, 0.5, symmetric_model(0.5, 0.3)), SingularityError);
}

TEST_CASE("mixture cdf") {
  const MbwParams s = study_model();
  CHECK(mbw_cdf(0.0, 0.0, s) == 0.0);
  CHECK(mbw_cdf(100.0, 100.0, s) == Approx(1.0));
  CHECK(mbw_cdf(0.1, 0.1, s) == Approx(0.3 + 0.7 * bvw_cdf(0.1, 0.1, s.base)).epsilon(1e-14));
}

TEST_CASE("mixture survival") {
  const MbwParams s = study_model();
  CHECK(mbw_survival(0.0, 0.0, s) == Approx(1.0).epsilon(1e-15));
  CHECK(mbw_survival(0.2, 0.05, s) == Approx(0.7 * bvw_survival(0.2, 0.05, s.base)));
  CHECK(mbw_survival(0.05, 0.05, s) ==
        Approx(0.3 * 0.25 + 0.7 * bvw_survival(0.05, 0.05, s.base)).epsilon(1e-14));
}

TEST_CASE("mixture hazard and weight") {
  const MbwParams m = symmetric_model(2.0, 0.2);
  CHECK(mbw_hazard(0.9, 0.5, m) == Approx(bvw_hazard(0.9, 0.5, m.base)).epsilon(1e-14));
  // f_XY(0,0) = 0 for shape 2, and R(0,0) = 1.
  CHECK(mbw_hazard(0.0, 0.0, m) == Approx(m.p / (0.4 * 0.4)).epsilon(1e-14));
  CHECK(mixture_weight(0.0, 0.0, m) == Approx(m.p));
  CHECK(mixture_weight(0.4, 0.1, m) == 0.0);
  CHECK(mixture_weight(0.1, 0.2, m) ==
        Approx(m.p * rect_survival(0.1, 0.2, m.rect) / mbw_survival(0.1, 0.2, m)));
}

TEST_CASE("weighted hazard form equals the direct ratio") {
  for (const auto& m : testing::model_sweep()) {
    RandomStream rng({5, 5});
    for (int k = 0; k < 200; ++k) {
      const double x = 0.999 * m.rect.d * rng.uniform() + 1e-3;
      const double y = 0.999 * m.rect.d * rng.uniform() + 1e-3;
      if (x >= m.rect.d || y >= m.rect.d) continue;
      const double w = mixture_weight(x, y, m);
      const double h = w * rect_hazard(x, y, m.rect) + (1.0 - w) * bvw_hazard(x, y, m.base);
      CHECK(std::abs(h - mbw_hazard(x, y, m)) <= 1e-10 * mbw_hazard(x, y, m));
    }
  }
}

TEST_CASE("hazard times survival equals density") {
  const auto c = testing::hazard_times_survival_is_density();
  CHECK_MESSAGE(c.ok, c.detail);
}

TEST_CASE("mixture density normalises") {
  const auto c = testing::joint_density_integrates_to_one();
  CHECK_MESSAGE(c.ok, c.detail);
}

TEST_CASE("survival is nonincreasing on a grid") {
  for (const auto& m : {study_model(), symmetric_model(2.0, 0.5), symmetric_model(0.5, 0.3)}) {
    const double span = 2.0 * std::max(m.base.margin1.scale, m.base.margin2.scale);
    std::vector<double> prev_row(100, 2.0);
    for (int i = 0; i < 100; ++i) {
      double prev = 2.0;
      for (int j = 0; j < 100; ++j) {
        const double r = mbw_survival(span * (i + 1) / 100.0, span * (j + 1) / 100.0, m);
        CHECK(r <= prev + 1e-15);
        CHECK(r <= prev_row[static_cast<std::size_t>(j)] + 1e-15);
        prev = r;
        prev_row[static_cast<std::size_t>(j)] = r;
      }
    }
  }
}

TEST_CASE("survival is continuous and density jumps by p/d^2 across the square edge") {
  const MbwParams m = symmetric_model(2.0, 0.3);
  const double e = 1e-12;
  for (double t : {0.05, 0.2, 0.35}) {
    CHECK(std::abs(mbw_survival(0.4 - e, t, m) - mbw_survival(0.4 + e, t, m)) < 1e-9);
    CHECK(std::abs(mbw_survival(t, 0.4 - e, m) - mbw_survival(t, 0.4 + e, m)) < 1e-9);
    CHECK(mbw_pdf(0.4, t, m) - mbw_pdf(0.4 + e, t, m) == Approx(0.3 / 0.16).epsilon(1e-9));
  }
}

TEST_CASE("hazard grid") {
  const MbwParams low_shape = symmetric_model(0.5, 0.3);
  const auto rows = hazard_grid(low_shape, {0.01, 1.0, 0.01, 1.0, 0.05});
  CHECK(rows.size() == 20 * 20);
  for (const auto& r : rows) {
    CHECK(r.h > 0.0);
    CHECK(std::abs(r.h - r.f / r.R) <= 1e-12 * r.h);
  }
  CHECK(rows[1].x == rows[0].x);
  CHECK(rows[1].y > rows[0].y);

  const auto plateau = hazard_grid(symmetric_model(2.0, 0.5), {0.0, 0.4, 0.0, 0.4, 0.1});
  for (const auto& r : plateau) {
    CHECK(r.f >= 0.5 / 0.16 * (1.0 - 1e-12));
  }
  CHECK(hazard_grid(low_shape, {0.1, 0.2, 0.1, 0.2, 5.0}).size() == 1);
  CHECK(hazard_grid(low_shape, {0.3, 0.3, 0.3, 0.3, 0.1}).size() == 1);
  CHECK_THROWS_AS(hazard_grid(low_shape, {0.0, 1.0, 0.0, 1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(hazard_grid(low_shape, {1.0, 0.0, 0.0, 1.0, 0.1}), DomainError);

  std::ostringstream out;
  write_grid_csv(out, hazard_grid(low_shape, {0.1, 0.1, 0.2, 0.2, 1.0}));
  CHECK(out.str().rfind("x,y,f,R,h\n0.10000000000000001,0.20000000000000001,", 0) == 0);
}

TEST_CASE("parameter validation") {
  MbwParams m = study_model();
  m.p = 0.0;
  CHECK_THROWS_AS(m.validate(), DomainError);
  m.p = 1.0;
  CHECK_THROWS_AS(m.validate(), DomainError);
  m = study_model();
  m.rect.d = -1.0;
  CHECK_THROWS_AS(m.validate(), DomainError);
  CHECK_THROWS_AS(mbw_pdf(-0.1, 0.1, study_model()), DomainError);
}
