#include "mbw/io.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include "mbw/errors.hpp"

#ifndef MBW_VERSION
#define MBW_VERSION "0.0.0"
#endif

namespace mbw {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_number(std::string_view field, std::size_t line) {
  field = trim(field);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    throw ParseError("line " + std::to_string(line) + ": '" + std::string(field) +
                     "' is not a number");
  }
  return v;
}

template <typename T>
T get_as(const Json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("config key '") + key + "': " + e.what());
  }
}

void reject_unknown(const Json& j, std::initializer_list<std::string_view> known,
                    const char* where) {
  if (!j.is_object()) {
    throw ParseError(std::string(where) + " must be a JSON object");
  }
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (auto k : known) {
      ok = ok || key == k;
    }
    if (!ok) {
      throw ParseError(std::string(where) + ": unknown key '" + key + "'");
    }
  }
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string utc_timestamp() {
  std::time_t t = 0;
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  } else {
    t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::vector<Point> read_points_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("empty input: expected an 'x,y' header");
  }
  {
    const std::string_view h = trim(line);
    const auto comma = h.find(',');
    if (comma == std::string_view::npos || trim(h.substr(0, comma)) != "x" ||
        trim(h.substr(comma + 1)) != "y") {
      throw ParseError("header must be 'x,y'");
    }
  }
  std::vector<Point> points;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    const std::string_view row = trim(line);
    if (row.empty()) {
      continue;
    }
    const auto comma = row.find(',');
    if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos) {
      throw ParseError("line " + std::to_string(number) + ": expected two fields");
    }
    points.push_back({parse_number(row.substr(0, comma), number),
                      parse_number(row.substr(comma + 1), number)});
  }
  return points;
}

std::vector<Point> read_points_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path + "'");
  }
  return read_points_csv(in);
}

void write_points_csv(std::ostream& out, std::span<const Point> points) {
  out << "x,y\n";
  char buf[64];
  for (const auto& p : points) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", p.x, p.y);
    out << buf;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot write '" + path + "'");
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) {
    throw IoError("write to '" + path + "' failed");
  }
}

Json to_json(const MbwParams& m) {
  Json j;
  j["alpha1"] = m.base.margin1.shape;
  j["beta1"] = m.base.margin1.scale;
  j["alpha2"] = m.base.margin2.shape;
  j["beta2"] = m.base.margin2.scale;
  j["copula"] = family_name(family_of(m.base.copula));
  j["rho"] = copula_rho(m.base.copula);
  if (const auto* g = std::get_if<GfgmParams>(&m.base.copula)) {
    j["a"] = g->a;
    j["b"] = g->b;
  }
  j["x0"] = m.rect.x0;
  j["y0"] = m.rect.y0;
  j["d"] = m.rect.d;
  j["p"] = m.p;
  return j;
}

MbwParams mbw_params_from_json(const Json& j, const MbwParams& defaults) {
  reject_unknown(j, {"alpha1", "beta1", "alpha2", "beta2", "copula", "rho", "a", "b", "x0", "y0",
                     "d", "p"},
                 "model parameters");
  MbwParams m = defaults;
  auto set = [&](const char* key, double& field) {
    if (j.contains(key)) {
      field = get_as<double>(j, key);
    }
  };
  set("alpha1", m.base.margin1.shape);
  set("beta1", m.base.margin1.scale);
  set("alpha2", m.base.margin2.shape);
  set("beta2", m.base.margin2.scale);
  set("x0", m.rect.x0);
  set("y0", m.rect.y0);
  set("d", m.rect.d);
  set("p", m.p);

  double rho = copula_rho(m.base.copula);
  set("rho", rho);
  CopulaFamily family = family_of(m.base.copula);
  if (j.contains("copula")) {
    try {
      family = parse_family(get_as<std::string>(j, "copula"));
    } catch (const DomainError& e) {
      throw ParseError(e.what());
    }
  }
  if (family == CopulaFamily::Gfgm) {
    GfgmParams g;
    if (const auto* old = std::get_if<GfgmParams>(&m.base.copula)) {
      g = *old;
    }
    set("a", g.a);
    set("b", g.b);
    g.rho = rho;
    m.base.copula = g;
  } else {
    if (j.contains("a") || j.contains("b")) {
      throw ParseError("keys 'a' and 'b' apply only to the gfgm copula");
    }
    m.base.copula = GaussianCopulaParams{rho};
  }
  return m;
}

Json to_json(const FitResult& r) {
  Json j;
  j["model"] = model_name(r.model);
  if (r.model == ModelKind::M3) {
    j["copula"] = family_name(r.family);
  } else {
    j["copula"] = r.model == ModelKind::M1 ? "independence" : "fgm";
  }
  j["n"] = r.n;
  j["k"] = r.k;
  j["loglik"] = r.loglik;
  j["aic"] = r.aic;
  Json params = Json::array();
  for (const auto& p : r.params) {
    Json e;
    e["name"] = p.name;
    e["estimate"] = p.estimate;
    e["se"] = optional_number(p.se);
    e["z"] = optional_number(p.z);
    e["p_value"] = optional_number(p.p_value);
    e["at_boundary"] = p.at_boundary;
    e["fixed"] = p.fixed;
    params.push_back(std::move(e));
  }
  j["parameters"] = std::move(params);
  Json conv;
  conv["converged"] = r.convergence.converged;
  conv["iterations"] = r.convergence.iterations;
  conv["evaluations"] = r.convergence.evaluations;
  conv["restarts"] = r.convergence.restarts;
  conv["boundary"] = r.convergence.boundary;
  conv["message"] = r.convergence.message;
  j["convergence"] = std::move(conv);
  if (!r.se_diagnostic.empty()) {
    j["se_diagnostic"] = r.se_diagnostic;
  }
  if (r.dbscan) {
    Json c;
    c["min_pts"] = r.dbscan->min_pts;
    c["eps"] = r.dbscan->eps;
    c["size"] = r.origin_cluster.size();
    j["origin_cluster"] = std::move(c);
  }
  return j;
}

Json to_json(const BootstrapResult& b) {
  Json j;
  j["replicates"] = b.replicates;
  j["failures"] = b.failures;
  Json params = Json::array();
  for (std::size_t i = 0; i < b.names.size(); ++i) {
    Json e;
    e["name"] = b.names[i];
    e["bse"] = b.bse[i];
    e["bci"] = {b.bci[i].first, b.bci[i].second};
    params.push_back(std::move(e));
  }
  j["parameters"] = std::move(params);
  return j;
}

Json to_json(const StudyConfig& c) {
  Json j;
  j["truth"] = to_json(c.truth);
  j["sample_sizes"] = c.sample_sizes;
  j["replicates"] = c.replicates;
  j["bootstrap_B"] = c.bootstrap_B;
  j["level"] = c.level;
  j["seed"] = c.base_seed;
  j["min_pts"] = c.min_pts;
  Json eps = Json::object();
  for (const auto& [n, e] : c.eps) {
    eps[std::to_string(n)] = e;
  }
  j["eps"] = std::move(eps);
  return j;
}

StudyConfig study_config_from_json(const Json& j) {
  reject_unknown(j, {"truth", "sample_sizes", "replicates", "bootstrap_B", "level", "seed",
                     "workers", "min_pts", "eps"},
                 "study config");
  StudyConfig c;
  if (j.contains("truth")) {
    c.truth = mbw_params_from_json(j.at("truth"), c.truth);
  }
  if (j.contains("sample_sizes")) {
    c.sample_sizes = get_as<std::vector<std::size_t>>(j, "sample_sizes");
  }
  if (j.contains("replicates")) {
    c.replicates = get_as<std::size_t>(j, "replicates");
  }
  if (j.contains("bootstrap_B")) {
    c.bootstrap_B = get_as<std::size_t>(j, "bootstrap_B");
  }
  if (j.contains("level")) {
    c.level = get_as<double>(j, "level");
  }
  if (j.contains("seed")) {
    c.base_seed = get_as<std::uint64_t>(j, "seed");
  }
  if (j.contains("workers")) {
    c.workers = get_as<unsigned>(j, "workers");
  }
  if (j.contains("min_pts")) {
    c.min_pts = get_as<std::size_t>(j, "min_pts");
  }
  if (j.contains("eps")) {
    const Json& e = j.at("eps");
    if (!e.is_object()) {
      throw ParseError("study config: 'eps' must map sample sizes to radii");
    }
    c.eps.clear();
    for (const auto& [key, value] : e.items()) {
      std::size_t n = 0;
      const auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), n);
      if (ec != std::errc() || ptr != key.data() + key.size() || !value.is_number()) {
        throw ParseError("study config: bad eps entry '" + key + "'");
      }
      c.eps[n] = value.get<double>();
    }
  }
  return c;
}

Json to_json(const StudyReport& r) {
  Json j;
  j["n"] = r.n;
  j["replicates"] = r.replicates;
  j["failures"] = r.failures;
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json e;
    e["parameter"] = row.parameter;
    e["truth"] = row.truth;
    e["SampleMean"] = row.sample_mean;
    e["CP"] = row.cp;
    e["BSE"] = row.bse;
    e["BCI_lo"] = row.bci_lo;
    e["BCI_hi"] = row.bci_hi;
    e["MSE"] = row.mse;
    e["Bias"] = row.bias;
    e["missing_intervals"] = row.missing_intervals;
    rows.push_back(std::move(e));
  }
  j["rows"] = std::move(rows);
  return j;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json manifest_json(const RunManifest& m) {
  Json j;
  j["command"] = m.command;
  j["parameters"] = m.parameters;
  j["seed"] = m.seed ? Json(*m.seed) : Json(nullptr);
  j["timestamp"] = utc_timestamp();
  j["input_digest"] = m.input_digest.empty() ? Json(nullptr) : Json(m.input_digest);
  j["version"] = version();
  return j;
}

std::string manifest_path_for(const std::string& output_path) {
  return output_path + ".manifest.json";
}

std::string version() { return MBW_VERSION; }

}  // namespace mbw
