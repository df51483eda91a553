#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "cli.hpp"
#include "mbw/errors.hpp"
#include "mbw/io.hpp"
#include "mbw/studies.hpp"
#include "mbw/vannman.hpp"

using namespace mbw;
using doctest::Approx;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "mbw");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "mbw_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::size_t line_count(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_CASE("simulate writes the requested rows and is reproducible") {
  const Outcome a = run_cli({"simulate", "-n", "5", "--seed", "42"});
  REQUIRE(a.code == 0);
  CHECK(line_count(a.out) == 6);
  CHECK(a.out.rfind("x,y\n", 0) == 0);
  CHECK(run_cli({"simulate", "-n", "5", "--seed", "42"}).out == a.out);
  CHECK(run_cli({"simulate", "-n", "5", "--seed", "43"}).out != a.out);

  const Outcome empty = run_cli({"simulate", "-n", "0"});
  CHECK(empty.code == 0);
  CHECK(empty.out == "x,y\n");
}

TEST_CASE("simulate places about p n points in the early-failure square") {
  const Outcome r = run_cli({"simulate", "-n", "100", "--seed", "7"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  const auto pts = read_points_csv(in);
  REQUIRE(pts.size() == 100);
  std::size_t inside = 0;
  for (const auto& p : pts) inside += (p.x <= 0.1 && p.y <= 0.1) ? 1 : 0;
  CHECK(inside >= 18);
  CHECK(inside <= 45);
}

TEST_CASE("simulate writes a file with a manifest") {
  const fs::path dir = scratch("simulate");
  const std::string out = (dir / "s.csv").string();
  REQUIRE(run_cli({"simulate", "-n", "10", "--out", out}).code == 0);
  CHECK(fs::exists(out));
  CHECK(fs::exists(manifest_path_for(out)));
  const Json m = Json::parse(read_file(manifest_path_for(out)));
  CHECK(m["command"] == "simulate");
}

TEST_CASE("simulate rejects invalid parameters") {
  CHECK(run_cli({"simulate", "--p", "1.5"}).code == 2);
  CHECK(run_cli({"simulate", "--copula", "clayton"}).code == 2);
  CHECK(run_cli({"simulate", "--bogus"}).code == 2);
  CHECK(run_cli({"simulate", "--config", "/nonexistent/params.json"}).code == 1);
}

TEST_CASE("fit M1 on the Vannman data") {
  const fs::path dir = scratch("fit_m1");
  const std::string out = (dir / "m1.json").string();
  const Outcome r = run_cli({"fit", "--vannman", "--model", "m1", "--out", out});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(read_file(out));
  CHECK(j["aic"].get<double>() == Approx(228.4698).epsilon(1e-3 / 228.0));
  CHECK(fs::exists(manifest_path_for(out)));
}

TEST_CASE("fit M3 from a CSV file") {
  const fs::path dir = scratch("fit_m3");
  const std::string data = (dir / "v.csv").string();
  {
    std::ofstream f(data);
    write_points_csv(f, vannman_data());
  }
  const std::string out = (dir / "m3.json").string();
  const Outcome r = run_cli({"fit", "--data", data, "--model", "m3", "--copula", "gaussian",
                             "--eps", "1.6", "--out", out});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(read_file(out));
  bool found = false;
  for (const auto& p : j["parameters"]) {
    if (p["name"] == "d") {
      CHECK(p["estimate"].get<double>() == 1.4);
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("fit reports input errors") {
  const fs::path dir = scratch("fit_errors");
  const std::string empty = (dir / "empty.csv").string();
  std::ofstream(empty).close();
  CHECK(run_cli({"fit", "--data", empty, "--model", "m1"}).code == 2);
  CHECK(run_cli({"fit", "--data", (dir / "missing.csv").string()}).code == 1);
  CHECK(run_cli({"fit", "--vannman", "--model", "m9"}).code == 2);
  CHECK(run_cli({"fit"}).code == 2);
  const std::string tiny = (dir / "tiny.csv").string();
  std::ofstream(tiny) << "x,y\n1,2\n2,3\n";
  CHECK(run_cli({"fit", "--data", tiny, "--model", "m3"}).code == 2);
}

TEST_CASE("study writes one file per sample size") {
  const fs::path dir = scratch("study");
  const Outcome r = run_cli({"study", "--replicates", "1", "--sizes", "100", "--out",
                             dir.string()});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(dir / "study_n100.csv"));
  CHECK(fs::exists(dir / "study_n100.json"));
  CHECK(fs::exists(dir / "study.manifest.json"));
  CHECK(line_count(read_file((dir / "study_n100.csv").string())) == 8);
}

TEST_CASE("study rejects an invalid level") {
  const fs::path dir = scratch("study_bad");
  const std::string cfg = (dir / "cfg.json").string();
  std::ofstream(cfg) << R"({"level": 1.5})";
  CHECK(run_cli({"study", "--config", cfg, "--out", dir.string()}).code == 2);
}

TEST_CASE("vannman prints the data and ranks the models") {
  const fs::path dir = scratch("vannman");
  const std::string out = (dir / "v.json").string();
  const Outcome r = run_cli({"vannman", "--out", out});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("    19       0.82       0.02") != std::string::npos);
  CHECK(r.out.find("    22       1.40       0.09") != std::string::npos);
  const Json j = Json::parse(read_file(out));
  const double a1 = j["m1"]["aic"].get<double>();
  const double a2 = j["m2"]["aic"].get<double>();
  const double a3 = j["m3"]["aic"].get<double>();
  CHECK(a3 < a2);
  CHECK(a2 < a1);
}

TEST_CASE("hazard grids for low and high margin shapes") {
  const fs::path dir = scratch("grid");
  const std::string low = (dir / "shape_half.csv").string();
  const std::string high = (dir / "shape_three.csv").string();
  const std::vector<std::string> common = {"--beta1", "1", "--beta2", "1", "--rho", "0.5",
                                           "--copula", "gfgm", "--d", "0.4", "--p", "0.08",
                                           "--x-min", "0.01", "--x-max", "1",
                                           "--y-min", "0.01", "--y-max", "1",
                                           "--step", "0.05"};
  auto low_args = std::vector<std::string>{"hazard-grid", "--alpha1", "0.5", "--alpha2", "0.5",
                                        "--out", low};
  low_args.insert(low_args.end(), common.begin(), common.end());
  REQUIRE(run_cli(low_args).code == 0);
  auto high_args = std::vector<std::string>{"hazard-grid", "--alpha1", "3", "--alpha2", "3",
                                        "--out", high};
  high_args.insert(high_args.end(), common.begin(), common.end());
  REQUIRE(run_cli(high_args).code == 0);
  CHECK(fs::exists(manifest_path_for(low)));

  std::istringstream in(read_file(high));
  std::string line;
  std::getline(in, line);
  CHECK(line == "x,y,f,R,h");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::istringstream ls(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ls, cell, ',')) v.push_back(std::stod(cell));
    REQUIRE(v.size() == 5);
    const bool on_edge = std::abs(v[0] - 0.4) < 1e-12 || std::abs(v[1] - 0.4) < 1e-12;
    if (!on_edge) {
      CHECK(std::isfinite(v[4]));
      CHECK(v[4] > 0.0);
    }
  }
  CHECK(rows == line_count(read_file(low)) - 1);
  CHECK(rows > 100);
}

TEST_CASE("hazard grid with a step larger than the range") {
  const Outcome r = run_cli({"hazard-grid", "--x-min", "0.5", "--x-max", "0.6", "--y-min",
                             "0.5", "--y-max", "0.6", "--step", "1"});
  REQUIRE(r.code == 0);
  CHECK(line_count(r.out) == 2);
  CHECK(run_cli({"hazard-grid", "--step", "0"}).code == 2);
  CHECK(run_cli({"hazard-grid", "--x-min", "2", "--x-max", "1"}).code == 2);
}

TEST_CASE("parameter JSON round trip") {
  MbwParams m = reference_truth();
  m.rect.d = 0.37;
  m.p = 0.21;
  const MbwParams back = mbw_params_from_json(to_json(m), MbwParams{});
  CHECK(back.rect.d == 0.37);
  CHECK(back.p == 0.21);
  CHECK(back.base.margin1.shape == m.base.margin1.shape);
  CHECK(family_of(back.base.copula) == CopulaFamily::Gaussian);
  CHECK(copula_rho(back.base.copula) == copula_rho(m.base.copula));
  CHECK_THROWS_AS(mbw_params_from_json(Json::parse(R"({"alpha9": 1})"), m), ParseError);
}

TEST_CASE("points CSV parsing") {
  std::istringstream ok("x,y\n1,2\n3.5,0\n");
  CHECK(read_points_csv(ok).size() == 2);
  std::istringstream no_header("1,2\n");
  CHECK_THROWS_AS(read_points_csv(no_header), ParseError);
  std::istringstream junk("x,y\n1,abc\n");
  CHECK_THROWS_AS(read_points_csv(junk), ParseError);
  std::istringstream empty("");
  CHECK_THROWS_AS(read_points_csv(empty), ParseError);
}

TEST_CASE("simulate then fit recovers the study parameters") {
  // Bootstrap interval bounds at n = 300 from the published study.
  const std::vector<std::tuple<std::string, double, double>> bci = {
      {"alpha1", 3.3936, 4.7940}, {"beta1", 1.4055, 1.5787}, {"alpha2", 2.9488, 4.2028},
      {"beta2", 4.6402, 5.3101},  {"rho", 0.4573, 0.7296},   {"d", 0.0946, 0.0999},
      {"p", 0.2199, 0.3800}};
  const fs::path dir = scratch("round_trip");
  std::map<std::string, int> hits;
  const int trials = 20;
  for (int t = 0; t < trials; ++t) {
    const std::string data = (dir / ("s" + std::to_string(t) + ".csv")).string();
    const std::string out = (dir / ("f" + std::to_string(t) + ".json")).string();
    REQUIRE(run_cli({"simulate", "-n", "300", "--seed", "500", "--stream", std::to_string(t),
                     "--out", data})
                .code == 0);
    REQUIRE(run_cli({"fit", "--data", data, "--model", "m3", "--copula", "gaussian", "--eps",
                     "0.25", "--out", out})
                .code == 0);
    const Json j = Json::parse(read_file(out));
    for (const auto& p : j["parameters"]) {
      for (const auto& [name, lo, hi] : bci) {
        if (p["name"] == name) {
          const double e = p["estimate"].get<double>();
          hits[name] += (e >= lo && e <= hi) ? 1 : 0;
        }
      }
    }
  }
  for (const auto& [name, lo, hi] : bci) {
    INFO(name << " inside " << hits[name] << " of " << trials);
    CHECK(hits[name] >= 16);
  }
}
