#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mbw/bootstrap.hpp"
#include "mbw/comparison.hpp"
#include "mbw/errors.hpp"
#include "mbw/fitting.hpp"
#include "mbw/io.hpp"
#include "mbw/sampler.hpp"
#include "mbw/studies.hpp"
#include "mbw/vannman.hpp"

namespace mbw::cli {

namespace {

std::string strf(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

struct ParamFlags {
  std::optional<double> alpha1, beta1, alpha2, beta2, rho, a, b, x0, y0, d, p;
  std::optional<std::string> copula;
};

void add_param_flags(CLI::App* sub, ParamFlags& f) {
  sub->add_option("--alpha1", f.alpha1, "Shape of the first Weibull margin");
  sub->add_option("--beta1", f.beta1, "Scale of the first Weibull margin");
  sub->add_option("--alpha2", f.alpha2, "Shape of the second Weibull margin");
  sub->add_option("--beta2", f.beta2, "Scale of the second Weibull margin");
  sub->add_option("--rho", f.rho, "Copula dependence parameter");
  sub->add_option("--gfgm-a", f.a, "GFGM exponent a (>= 1)");
  sub->add_option("--gfgm-b", f.b, "GFGM exponent b (>= 1)");
  sub->add_option("--x0", f.x0, "Lower-left x of the early-failure square");
  sub->add_option("--y0", f.y0, "Lower-left y of the early-failure square");
  sub->add_option("--d", f.d, "Side of the early-failure square");
  sub->add_option("--p", f.p, "Early-failure mixing probability");
  sub->add_option("--copula", f.copula, "Copula family: gfgm or gaussian");
}

// Config file first, then individual flags on top.
MbwParams resolve_params(const std::optional<std::string>& config, const ParamFlags& f) {
  MbwParams m = reference_truth();
  if (config) {
    Json j;
    try {
      j = Json::parse(read_file(*config));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("config '" + *config + "': " + e.what());
    }
    m = mbw_params_from_json(j, m);
  }
  Json overrides = Json::object();
  auto put = [&](const char* key, const std::optional<double>& v) {
    if (v) {
      overrides[key] = *v;
    }
  };
  put("alpha1", f.alpha1);
  put("beta1", f.beta1);
  put("alpha2", f.alpha2);
  put("beta2", f.beta2);
  put("rho", f.rho);
  put("a", f.a);
  put("b", f.b);
  put("x0", f.x0);
  put("y0", f.y0);
  put("d", f.d);
  put("p", f.p);
  if (f.copula) {
    overrides["copula"] = *f.copula;
  }
  m = mbw_params_from_json(overrides, m);
  m.validate();
  return m;
}

void write_with_manifest(const std::string& path, const std::string& content,
                         const RunManifest& manifest) {
  write_file(path, content);
  write_file(manifest_path_for(path), manifest_json(manifest).dump(2) + "\n");
}

std::string points_csv(std::span<const Point> pts) {
  std::ostringstream ss;
  write_points_csv(ss, pts);
  return ss.str();
}

std::string opt_num(const std::optional<double>& v, const char* format) {
  return v ? strf(format, *v) : std::string("-");
}

void print_fit(std::ostream& out, const FitResult& r) {
  std::string title = "Model " + model_name(r.model);
  if (r.model == ModelKind::M3) {
    title += " (" + family_name(r.family) + " copula)";
  }
  out << title << ", n = " << r.n << "\n";
  out << strf("  %-8s %14s %12s %10s %12s\n", "param", "estimate", "SE", "z", "p-value");
  for (const auto& p : r.params) {
    std::string note = p.fixed ? "  (fixed)" : p.at_boundary ? "  (boundary)" : "";
    out << strf("  %-8s %14.7f %12s %10s %12s", p.name.c_str(), p.estimate,
                opt_num(p.se, "%.7f").c_str(), opt_num(p.z, "%.3f").c_str(),
                opt_num(p.p_value, "%.3g").c_str())
        << note << "\n";
  }
  out << strf("  loglik %.6f   AIC %.4f   k %d\n", r.loglik, r.aic, r.k);
  out << "  converged: " << (r.convergence.converged ? "yes" : "no") << " ("
      << r.convergence.message << ", " << r.convergence.evaluations << " evaluations)\n";
  if (!r.se_diagnostic.empty()) {
    out << "  note: " << r.se_diagnostic << "\n";
  }
}

FitResult fit_model(std::span<const Point> data, ModelKind model, const FitConfig& cfg) {
  switch (model) {
    case ModelKind::M1:
      return fit_m1(data);
    case ModelKind::M2:
      return fit_m2(data, cfg.optimizer);
    case ModelKind::M3:
      return fit_mbw(data, cfg);
  }
  return fit_mbw(data, cfg);
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::size_t n = 100;
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;
  std::optional<std::string> out;
  std::optional<std::string> config;
  ParamFlags params;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const MbwParams m = resolve_params(a.config, a.params);
  const std::vector<Point> data = sample_mbw(a.n, m, SeededStream{a.seed, a.stream});
  const std::string csv = points_csv(data);
  if (!a.out) {
    out << csv;
    return kOk;
  }
  Json params;
  params["model"] = to_json(m);
  params["n"] = a.n;
  params["stream"] = a.stream;
  write_with_manifest(*a.out, csv, {"simulate", params, a.seed, ""});
  return kOk;
}

// --------------------------------------------------------------------- fit

struct FitArgs {
  std::optional<std::string> data;
  bool vannman = false;
  std::string model = "m3";
  std::string copula = "gfgm";
  std::size_t min_pts = 4;
  std::optional<double> eps;
  double level = 0.95;
  std::size_t bootstrap_B = 0;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::optional<std::string> out;
  std::optional<std::string> config;
};

// Keys of a fit config file; explicit flags win over these.
void apply_fit_config(FitArgs& a, const CLI::App* sub) {
  if (!a.config) {
    return;
  }
  Json j;
  try {
    j = Json::parse(read_file(*a.config));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("config '" + *a.config + "': " + e.what());
  }
  if (!j.is_object()) {
    throw ParseError("fit config must be a JSON object");
  }
  try {
    for (const auto& [key, value] : j.items()) {
      const bool flagged = sub->count("--" + (key == "min_pts" ? std::string("minpts") : key)) > 0;
      if (flagged) {
        continue;
      }
      if (key == "model") {
        a.model = value.get<std::string>();
      } else if (key == "copula") {
        a.copula = value.get<std::string>();
      } else if (key == "min_pts") {
        a.min_pts = value.get<std::size_t>();
      } else if (key == "eps") {
        a.eps = value.get<double>();
      } else if (key == "level") {
        a.level = value.get<double>();
      } else if (key == "bootstrap") {
        a.bootstrap_B = value.get<std::size_t>();
      } else if (key == "seed") {
        a.seed = value.get<std::uint64_t>();
      } else {
        throw ParseError("fit config: unknown key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("fit config: ") + e.what());
  }
}

int cmd_fit(FitArgs a, const CLI::App* sub, std::ostream& out) {
  apply_fit_config(a, sub);
  if (a.data.has_value() == a.vannman) {
    throw ParseError("give exactly one of --data or --vannman");
  }
  std::vector<Point> data;
  std::string digest;
  if (a.vannman) {
    const auto v = vannman_data();
    data.assign(v.begin(), v.end());
    digest = fnv1a_hex(points_csv(data));
  } else {
    const std::string bytes = read_file(*a.data);
    std::istringstream in(bytes);
    data = read_points_csv(in);
    digest = fnv1a_hex(bytes);
  }
  if (data.empty()) {
    throw ParseError("no observations in input");
  }
  if (!(a.level > 0.0 && a.level < 1.0)) {
    throw DomainError("--level must lie in (0, 1)");
  }

  const ModelKind model = parse_model(a.model);
  FitConfig cfg;
  cfg.family = parse_family(a.copula);
  cfg.min_pts = a.min_pts;
  cfg.eps = a.eps;
  FitResult r = fit_model(data, model, cfg);
  compute_se(data, r);
  Json j = to_json(r);

  print_fit(out, r);
  if (model == ModelKind::M3) {
    const auto [lo, hi] = d_confidence_interval(r.origin_cluster, a.level);
    j["d_interval"] = {{"level", a.level}, {"lower", lo}, {"upper", hi}};
    out << strf("  d interval (%.0f%%): [%.6g, %.6g]\n", 100.0 * a.level, lo, hi);
  }
  if (a.bootstrap_B > 0) {
    const Fitter refit = [&](std::span<const Point> s) { return fit_model(s, model, cfg); };
    const BootstrapResult boot = bootstrap(data, refit, a.bootstrap_B, a.seed, a.workers, a.level);
    j["bootstrap"] = to_json(boot);
    out << "  bootstrap (" << boot.replicates << " resamples, " << boot.failures
        << " failed)\n";
    for (std::size_t i = 0; i < boot.names.size(); ++i) {
      out << strf("  %-8s BSE %12.7f   BCI [%.7f, %.7f]\n", boot.names[i].c_str(), boot.bse[i],
                  boot.bci[i].first, boot.bci[i].second);
    }
  }

  if (a.out) {
    Json params;
    params["model"] = a.model;
    params["copula"] = a.copula;
    params["min_pts"] = a.min_pts;
    params["eps"] = a.eps ? Json(*a.eps) : Json(nullptr);
    params["level"] = a.level;
    params["bootstrap"] = a.bootstrap_B;
    params["input"] = a.vannman ? std::string("vannman") : *a.data;
    write_with_manifest(*a.out, j.dump(2) + "\n",
                        {"fit", params, a.bootstrap_B > 0 ? std::optional(a.seed) : std::nullopt,
                         digest});
  }
  return r.convergence.converged ? kOk : kNoConvergence;
}

// ------------------------------------------------------------------- study

struct StudyArgs {
  std::optional<std::string> config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replicates;
  std::optional<std::vector<std::size_t>> sizes;
  std::optional<std::string> copula;
  std::optional<std::size_t> min_pts;
  std::optional<double> eps;
  std::optional<std::size_t> bootstrap_B;
  bool full = false;
  unsigned workers = 1;
};

int cmd_study(const StudyArgs& a, std::ostream& out) {
  StudyConfig cfg;
  if (a.config) {
    Json j;
    try {
      j = Json::parse(read_file(*a.config));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("config '" + *a.config + "': " + e.what());
    }
    cfg = study_config_from_json(j);
  }
  if (a.full) {
    cfg.replicates = 2000;
  }
  if (a.replicates) cfg.replicates = *a.replicates;
  if (a.seed) cfg.base_seed = *a.seed;
  if (a.sizes) cfg.sample_sizes = *a.sizes;
  if (a.min_pts) cfg.min_pts = *a.min_pts;
  if (a.bootstrap_B) cfg.bootstrap_B = *a.bootstrap_B;
  if (a.copula) {
    Json c;
    c["copula"] = *a.copula;
    cfg.truth = mbw_params_from_json(c, cfg.truth);
  }
  if (a.eps) {
    cfg.eps.clear();
    for (std::size_t n : cfg.sample_sizes) {
      cfg.eps[n] = *a.eps;
    }
  }
  cfg.workers = a.workers;
  cfg.validate();

  const std::vector<StudyReport> reports = run_study(cfg);
  const std::filesystem::path dir(a.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create '" + a.out + "'");
  }
  Json all = Json::array();
  for (const auto& rep : reports) {
    const std::string stem = (dir / ("study_n" + std::to_string(rep.n))).string();
    std::ostringstream csv;
    write_study_csv(csv, rep);
    write_file(stem + ".csv", csv.str());
    write_file(stem + ".json", to_json(rep).dump(2) + "\n");

    out << "n = " << rep.n << " (" << rep.replicates << " replicates, " << rep.failures
        << " failed)\n";
    out << strf("  %-8s %10s %8s %10s %10s %10s %10s %10s\n", "param", "mean", "CP", "BSE",
                "BCI_lo", "BCI_hi", "MSE", "Bias");
    for (const auto& row : rep.rows) {
      out << strf("  %-8s %10.4f %8.3f %10.4f %10.4f %10.4f %10.4f %10.4f\n",
                  row.parameter.c_str(), row.sample_mean, row.cp, row.bse, row.bci_lo,
                  row.bci_hi, row.mse, row.bias);
    }
    all.push_back(to_json(rep));
  }
  write_file((dir / "study.manifest.json").string(),
             manifest_json({"study", to_json(cfg), cfg.base_seed, ""}).dump(2) + "\n");
  return kOk;
}

// ----------------------------------------------------------------- vannman

struct VannmanArgs {
  std::optional<std::string> copula;
  std::size_t min_pts = 4;
  double eps = 1.6;
  std::optional<std::string> out;
};

int cmd_vannman(const VannmanArgs& a, std::ostream& out) {
  const auto data = vannman_data();
  out << "Vannman (1991) board-drying data\n";
  out << strf("  %4s %10s %10s\n", "row", "schedule1", "schedule2");
  for (std::size_t i = 0; i < data.size(); ++i) {
    out << strf("  %4zu %10.2f %10.2f\n", i + 1, data[i].x, data[i].y);
  }
  out << "\n";

  ComparisonOptions opt;
  if (a.copula) {
    opt.family = parse_family(*a.copula);
  }
  opt.min_pts = a.min_pts;
  opt.eps = a.eps;
  const ModelComparison c = compare_models(data, opt);

  print_fit(out, c.m1);
  out << "\n";
  print_fit(out, c.m2);
  out << "\n";
  print_fit(out, c.m3);
  out << "\n";
  out << "Model comparison\n";
  out << strf("  %-6s %-12s %3s %14s %12s\n", "model", "copula", "k", "loglik", "AIC");
  auto line = [&](const FitResult& r, const std::string& copula) {
    out << strf("  %-6s %-12s %3d %14.6f %12.4f\n", model_name(r.model).c_str(), copula.c_str(),
                r.k, r.loglik, r.aic);
  };
  line(c.m1, "independent");
  line(c.m2, "fgm");
  for (const auto& r : c.m3_candidates) {
    line(r, family_name(r.family));
  }
  out << "  selected M3 copula: " << family_name(c.m3.family) << "\n";
  auto dev = [&](const char* name, const DevianceTest& t) {
    out << strf("  deviance %s: statistic %.4f on %d df, p = %.3g", name, t.statistic, t.df,
                t.p_value);
    out << (t.diagnostic.empty() ? "" : "  [" + t.diagnostic + "]") << "\n";
  };
  dev("M3 vs M2", c.m3_vs_m2);
  dev("M2 vs M1", c.m2_vs_m1);

  if (a.out) {
    Json j;
    j["m1"] = to_json(c.m1);
    j["m2"] = to_json(c.m2);
    j["m3"] = to_json(c.m3);
    Json cands = Json::array();
    for (const auto& r : c.m3_candidates) {
      cands.push_back(to_json(r));
    }
    j["m3_candidates"] = std::move(cands);
    j["deviance"] = {
        {"m3_vs_m2",
         {{"statistic", c.m3_vs_m2.statistic}, {"df", c.m3_vs_m2.df}, {"p_value", c.m3_vs_m2.p_value}}},
        {"m2_vs_m1",
         {{"statistic", c.m2_vs_m1.statistic}, {"df", c.m2_vs_m1.df}, {"p_value", c.m2_vs_m1.p_value}}}};
    Json params;
    params["copula"] = a.copula ? Json(*a.copula) : Json("auto");
    params["min_pts"] = a.min_pts;
    params["eps"] = a.eps;
    write_with_manifest(*a.out, j.dump(2) + "\n",
                        {"vannman", params, std::nullopt,
                         fnv1a_hex(points_csv(data))});
  }
  bool converged = c.m2.convergence.converged;
  for (const auto& r : c.m3_candidates) {
    converged = converged && r.convergence.converged;
  }
  return converged ? kOk : kNoConvergence;
}

// ------------------------------------------------------------- hazard-grid

struct GridArgs {
  GridSpec grid;
  std::optional<std::string> out;
  std::optional<std::string> config;
  ParamFlags params;
};

int cmd_hazard_grid(const GridArgs& a, std::ostream& out) {
  const MbwParams m = resolve_params(a.config, a.params);
  a.grid.validate();
  std::ostringstream csv;
  write_grid_csv(csv, hazard_grid(m, a.grid));
  if (!a.out) {
    out << csv.str();
    return kOk;
  }
  Json params;
  params["model"] = to_json(m);
  params["grid"] = {{"x_min", a.grid.x_min}, {"x_max", a.grid.x_max}, {"y_min", a.grid.y_min},
                    {"y_max", a.grid.y_max}, {"step", a.grid.step}};
  write_with_manifest(*a.out, csv.str(), {"hazard-grid", params, std::nullopt, ""});
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Modified bivariate Weibull toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version());

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Draw a sample from the mixture model");
  s->add_option("-n,--n", sim.n, "Number of observations")->capture_default_str();
  s->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
  s->add_option("--stream", sim.stream, "Stream id under the seed")->capture_default_str();
  s->add_option("--out", sim.out, "Output CSV (stdout when omitted)");
  s->add_option("--config", sim.config, "JSON file with model parameters");
  add_param_flags(s, sim.params);

  FitArgs fit;
  auto* f = app.add_subcommand("fit", "Fit M1, M2 or M3 to a CSV sample");
  f->add_option("--data", fit.data, "Input CSV with an x,y header");
  f->add_flag("--vannman", fit.vannman, "Use the embedded Vannman data");
  f->add_option("--model", fit.model, "m1, m2 or m3")
      ->check(CLI::IsMember({"m1", "m2", "m3"}))
      ->capture_default_str();
  f->add_option("--copula", fit.copula, "M3 copula: gfgm or gaussian")
      ->check(CLI::IsMember({"gfgm", "gaussian"}))
      ->capture_default_str();
  f->add_option("--minpts", fit.min_pts, "DBSCAN minimum points")->capture_default_str();
  f->add_option("--eps", fit.eps, "DBSCAN radius (knee of the k-distance curve when omitted)");
  f->add_option("--level", fit.level, "Confidence level for the d interval")
      ->capture_default_str();
  f->add_option("--bootstrap", fit.bootstrap_B, "Bootstrap resamples (0 to skip)")
      ->capture_default_str();
  f->add_option("--seed", fit.seed, "Bootstrap seed")->capture_default_str();
  f->add_option("--workers", fit.workers, "Bootstrap threads")->capture_default_str();
  f->add_option("--out", fit.out, "Write the result as JSON");
  f->add_option("--config", fit.config, "JSON file with fit settings");

  StudyArgs st;
  auto* y = app.add_subcommand("study", "Run the Monte-Carlo simulation study");
  y->add_option("--config", st.config, "JSON study configuration");
  y->add_option("--out", st.out, "Output directory")->capture_default_str();
  y->add_option("--seed", st.seed, "Base seed");
  y->add_option("--replicates", st.replicates, "Replicates per sample size");
  y->add_flag("--full", st.full, "Use 2000 replicates");
  y->add_option("--sizes", st.sizes, "Sample sizes");
  y->add_option("--copula", st.copula, "Copula of the true model")
      ->check(CLI::IsMember({"gfgm", "gaussian"}));
  y->add_option("--minpts", st.min_pts, "DBSCAN minimum points");
  y->add_option("--eps", st.eps, "DBSCAN radius for every sample size");
  y->add_option("--bootstrap", st.bootstrap_B, "Bootstrap resamples per replicate");
  y->add_option("--workers", st.workers, "Worker threads")->capture_default_str();

  VannmanArgs vn;
  auto* v = app.add_subcommand("vannman", "Print the Vannman data and compare M1, M2, M3");
  v->add_option("--copula", vn.copula, "M3 copula (both are tried when omitted)")
      ->check(CLI::IsMember({"gfgm", "gaussian"}));
  v->add_option("--minpts", vn.min_pts, "DBSCAN minimum points")->capture_default_str();
  v->add_option("--eps", vn.eps, "DBSCAN radius")->capture_default_str();
  v->add_option("--out", vn.out, "Write the comparison as JSON");

  GridArgs gr;
  auto* g = app.add_subcommand("hazard-grid", "Evaluate f, R and h on a lattice");
  g->add_option("--x-min", gr.grid.x_min)->capture_default_str();
  g->add_option("--x-max", gr.grid.x_max)->capture_default_str();
  g->add_option("--y-min", gr.grid.y_min)->capture_default_str();
  g->add_option("--y-max", gr.grid.y_max)->capture_default_str();
  g->add_option("--step", gr.grid.step)->capture_default_str();
  g->add_option("--out", gr.out, "Output CSV (stdout when omitted)");
  g->add_option("--config", gr.config, "JSON file with model parameters");
  add_param_flags(g, gr.params);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidInput;
  }

  try {
    if (*s) return cmd_simulate(sim, out);
    if (*f) return cmd_fit(fit, f, out);
    if (*y) return cmd_study(st, out);
    if (*v) return cmd_vannman(vn, out);
    if (*g) return cmd_hazard_grid(gr, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << "\n";
    return kNoConvergence;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
  return kInvalidInput;
}

}  // namespace mbw::cli
