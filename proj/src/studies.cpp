#include "mbw/studies.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>

#include "mbw/bootstrap.hpp"
#include "mbw/errors.hpp"
#include "mbw/fitting.hpp"
#include "mbw/normal.hpp"
#include "mbw/parallel.hpp"
#include "mbw/sampler.hpp"

namespace mbw {

namespace {

const std::vector<std::string> kParams = {"alpha1", "beta1", "alpha2", "beta2", "rho", "d", "p"};

double truth_of(const MbwParams& m, const std::string& name) {
  if (name == "alpha1") return m.base.margin1.shape;
  if (name == "beta1") return m.base.margin1.scale;
  if (name == "alpha2") return m.base.margin2.shape;
  if (name == "beta2") return m.base.margin2.scale;
  if (name == "rho") return copula_rho(m.base.copula);
  if (name == "d") return m.rect.d;
  return m.p;
}

struct ReplicateOutcome {
  std::vector<double> estimates;
  std::vector<std::optional<std::pair<double, double>>> intervals;
  std::vector<double> bse;
  std::vector<std::pair<double, double>> bci;
};

std::optional<ReplicateOutcome> run_replicate(const StudyConfig& cfg, std::size_t n,
                                              std::size_t r) {
  const std::vector<Point> data =
      sample_mbw(n, cfg.truth, SeededStream{derive_seed(cfg.base_seed, n), r});
  FitConfig fc;
  fc.family = family_of(cfg.truth.base.copula);
  if (const auto* g = std::get_if<GfgmParams>(&cfg.truth.base.copula)) {
    fc.gfgm_a = g->a;
    fc.gfgm_b = g->b;
  }
  fc.min_pts = cfg.min_pts;
  if (auto it = cfg.eps.find(n); it != cfg.eps.end()) {
    fc.eps = it->second;
  }
  try {
    FitResult fit = fit_mbw(data, fc);
    if (!fit.convergence.converged) {
      return std::nullopt;
    }
    compute_se(data, fit);
    const double z = std_normal_quantile(0.5 + 0.5 * cfg.level);
    ReplicateOutcome out;
    for (const auto& name : kParams) {
      const ParamEstimate& pe = fit.param(name);
      out.estimates.push_back(pe.estimate);
      if (name == "d") {
        out.intervals.emplace_back(d_confidence_interval(fit.origin_cluster, cfg.level));
      } else if (pe.se) {
        out.intervals.emplace_back(std::pair{pe.estimate - z * *pe.se, pe.estimate + z * *pe.se});
      } else {
        out.intervals.emplace_back(std::nullopt);
      }
    }
    if (cfg.bootstrap_B > 0) {
      const Fitter refit = [fc](std::span<const Point> s) { return fit_mbw(s, fc); };
      const BootstrapResult boot =
          bootstrap(data, refit, cfg.bootstrap_B, derive_seed(cfg.base_seed, n * 1000003 + r),
                    1, cfg.level);
      out.bse = boot.bse;
      out.bci = boot.bci;
    }
    return out;
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

std::pair<double, double> bias_mse(std::span<const double> estimates, double truth) {
  if (estimates.empty()) {
    throw DomainError("bias_mse: no estimates");
  }
  double sum = 0.0, sq = 0.0;
  for (double e : estimates) {
    sum += e;
    sq += (e - truth) * (e - truth);
  }
  const auto n = static_cast<double>(estimates.size());
  return {sum / n - truth, sq / n};
}

double coverage_probability(std::span<const std::pair<double, double>> intervals, double truth) {
  if (intervals.empty()) {
    throw DomainError("coverage_probability: no intervals");
  }
  std::size_t hits = 0;
  for (const auto& [lo, hi] : intervals) {
    hits += (lo <= truth && truth <= hi) ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(intervals.size());
}

MbwParams reference_truth() {
  MbwParams m;
  m.base.margin1 = {4.0, 1.5};
  m.base.margin2 = {3.5, 5.0};
  m.base.copula = GaussianCopulaParams{0.6};
  m.rect = {0.0, 0.0, 0.1};
  m.p = 0.3;
  return m;
}

void StudyConfig::validate() const {
  truth.validate();
  if (replicates < 1) {
    throw DomainError("study: replicates must be at least 1");
  }
  if (!(level > 0.0 && level < 1.0)) {
    throw DomainError("study: level must lie in (0, 1)");
  }
  if (sample_sizes.empty()) {
    throw DomainError("study: no sample sizes");
  }
  for (std::size_t n : sample_sizes) {
    if (n < kMinFitSize) {
      throw DomainError("study: sample size below the fitting minimum");
    }
  }
  if (bootstrap_B == 1) {
    throw DomainError("study: bootstrap_B must be 0 or at least 2");
  }
}

const StudyRow& StudyReport::row(const std::string& parameter) const {
  for (const auto& r : rows) {
    if (r.parameter == parameter) {
      return r;
    }
  }
  throw DomainError("study report has no parameter '" + parameter + "'");
}

std::vector<StudyReport> run_study(const StudyConfig& cfg) {
  cfg.validate();
  std::vector<StudyReport> reports;
  for (std::size_t n : cfg.sample_sizes) {
    std::vector<std::optional<ReplicateOutcome>> outcomes(cfg.replicates);
    parallel_for(cfg.replicates, cfg.workers,
                 [&](std::size_t r) { outcomes[r] = run_replicate(cfg, n, r); });

    StudyReport rep;
    rep.n = n;
    rep.replicates = cfg.replicates;
    for (const auto& o : outcomes) {
      rep.failures += o ? 0 : 1;
    }
    if (static_cast<double>(rep.failures) >
        kMaxStudyFailureRate * static_cast<double>(cfg.replicates)) {
      throw ConvergenceError("study: " + std::to_string(rep.failures) + " of " +
                             std::to_string(cfg.replicates) + " replicates failed at n = " +
                             std::to_string(n));
    }
    const double tail = 0.5 * (1.0 - cfg.level);
    for (std::size_t j = 0; j < kParams.size(); ++j) {
      StudyRow row;
      row.parameter = kParams[j];
      row.truth = truth_of(cfg.truth, kParams[j]);
      std::vector<double> est;
      std::size_t covered = 0, counted = 0;
      double bse_sum = 0.0, lo_sum = 0.0, hi_sum = 0.0;
      for (const auto& o : outcomes) {
        if (!o) {
          continue;
        }
        est.push_back(o->estimates[j]);
        ++counted;
        if (const auto& iv = o->intervals[j]) {
          covered += (iv->first <= row.truth && row.truth <= iv->second) ? 1 : 0;
        } else {
          ++row.missing_intervals;
        }
        if (cfg.bootstrap_B > 0) {
          bse_sum += o->bse[j];
          lo_sum += o->bci[j].first;
          hi_sum += o->bci[j].second;
        }
      }
      const auto [bias, mse] = bias_mse(est, row.truth);
      row.bias = bias;
      row.mse = mse;
      row.sample_mean = row.truth + bias;
      row.sd = sample_sd(est);
      row.cp = static_cast<double>(covered) / static_cast<double>(counted);
      if (cfg.bootstrap_B > 0) {
        const auto k = static_cast<double>(counted);
        row.bse = bse_sum / k;
        row.bci_lo = lo_sum / k;
        row.bci_hi = hi_sum / k;
      } else {
        std::sort(est.begin(), est.end());
        row.bse = row.sd;
        row.bci_lo = percentile_sorted(est, tail);
        row.bci_hi = percentile_sorted(est, 1.0 - tail);
      }
      rep.rows.push_back(row);
    }
    reports.push_back(std::move(rep));
  }
  return reports;
}

void write_study_csv(std::ostream& out, const StudyReport& report) {
  out << "parameter,SampleMean,CP,BSE,BCI_lo,BCI_hi,MSE,Bias\n";
  char buf[512];
  for (const auto& r : report.rows) {
    std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  r.parameter.c_str(), r.sample_mean, r.cp, r.bse, r.bci_lo, r.bci_hi, r.mse,
                  r.bias);
    out << buf;
  }
}

}  // namespace mbw
