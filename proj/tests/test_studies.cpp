#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mbw/errors.hpp"
#include "mbw/fitting.hpp"
#include "mbw/rng.hpp"
#include "mbw/sampler.hpp"
#include "mbw/studies.hpp"

using namespace mbw;
using doctest::Approx;

TEST_CASE("bias and mean squared error") {
  const std::vector<double> est = {1.0, 2.0, 3.0};
  const auto [bias, mse] = bias_mse(est, 1.5);
  CHECK(bias == Approx(0.5));
  CHECK(mse == Approx((0.25 + 0.25 + 2.25) / 3.0));
  CHECK_THROWS_AS(bias_mse(std::vector<double>{}, 0.0), DomainError);
}

TEST_CASE("coverage probability") {
  const std::vector<std::pair<double, double>> ci = {{0, 1}, {0.5, 2}, {2, 3}, {-1, 0.5}};
  CHECK(coverage_probability(ci, 0.5) == Approx(0.75));
  CHECK(coverage_probability(ci, 10.0) == 0.0);
  CHECK_THROWS_AS(coverage_probability(std::vector<std::pair<double, double>>{}, 0.0),
                  DomainError);
}

TEST_CASE("mean squared error is at least the squared bias") {
  RandomStream rng({70, 0});
  for (int k = 0; k < 50; ++k) {
    std::vector<double> est(1 + rng.index(30));
    for (auto& e : est) e = rng.uniform() * 4.0 - 2.0;
    const auto [bias, mse] = bias_mse(est, rng.uniform());
    CHECK(mse >= bias * bias - 1e-12);
  }
}

TEST_CASE("study configuration checks") {
  StudyConfig cfg;
  cfg.level = 1.5;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = {};
  cfg.replicates = 0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = {};
  cfg.sample_sizes = {5};
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = {};
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("a one-replicate study reproduces the single fit") {
  StudyConfig cfg;
  cfg.replicates = 1;
  cfg.sample_sizes = {100};
  const auto reports = run_study(cfg);
  REQUIRE(reports.size() == 1);
  const auto data =
      sample_mbw(100, cfg.truth, SeededStream{derive_seed(cfg.base_seed, 100), 0});
  FitConfig fc;
  fc.family = CopulaFamily::Gaussian;
  fc.eps = 0.45;
  const FitResult fit = fit_mbw(data, fc);
  for (const char* name : {"alpha1", "beta1", "alpha2", "beta2", "rho", "d", "p"}) {
    const StudyRow& row = reports[0].row(name);
    CHECK(row.sample_mean == fit.estimate(name));
    CHECK(row.bias == Approx(fit.estimate(name) - row.truth));
  }
}

TEST_CASE("study at n = 100 recovers the scale of the first margin") {
  StudyConfig cfg;
  cfg.sample_sizes = {100};
  cfg.replicates = 200;
  const auto reports = run_study(cfg);
  const StudyRow& b1 = reports[0].row("beta1");
  CHECK(std::abs(b1.bias) < 0.05);
  CHECK(b1.mse < 0.01);
  CHECK(reports[0].failures == 0);
  for (const auto& row : reports[0].rows) {
    CHECK(row.mse >= row.bias * row.bias - 1e-12);
  }
}

TEST_CASE("study error shrinks with sample size") {
  StudyConfig cfg;
  cfg.sample_sizes = {100, 300};
  cfg.replicates = 100;
  const auto reports = run_study(cfg);
  for (const char* name : {"beta1", "beta2", "alpha1"}) {
    CHECK(reports[1].row(name).mse < reports[0].row(name).mse);
  }
}

TEST_CASE("study output does not depend on the worker count") {
  StudyConfig cfg;
  cfg.sample_sizes = {100};
  cfg.replicates = 12;
  const auto one = run_study(cfg);
  cfg.workers = 4;
  const auto many = run_study(cfg);
  std::ostringstream a, b;
  write_study_csv(a, one[0]);
  write_study_csv(b, many[0]);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("parameter,SampleMean,CP,BSE,BCI_lo,BCI_hi,MSE,Bias\n", 0) == 0);
}

TEST_CASE("study with bootstrap intervals") {
  StudyConfig cfg;
  cfg.sample_sizes = {100};
  cfg.replicates = 3;
  cfg.bootstrap_B = 20;
  const auto reports = run_study(cfg);
  for (const auto& row : reports[0].rows) {
    CHECK(row.bci_lo <= row.bci_hi);
    CHECK(row.bse >= 0.0);
  }
}
