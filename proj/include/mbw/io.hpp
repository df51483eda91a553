#ifndef MBW_IO_HPP
#define MBW_IO_HPP

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mbw/bootstrap.hpp"
#include "mbw/fitting.hpp"
#include "mbw/mbw_model.hpp"
#include "mbw/point.hpp"
#include "mbw/studies.hpp"

namespace mbw {

using Json = nlohmann::ordered_json;

/// Comma-separated, '.' decimal point, mandatory `x,y` header row.
std::vector<Point> read_points_csv(std::istream& in);
std::vector<Point> read_points_csv(const std::string& path);
void write_points_csv(std::ostream& out, std::span<const Point> points);

std::string read_file(const std::string& path);
/// Writes `content` to `path` in binary mode; throws IoError on failure.
void write_file(const std::string& path, std::string_view content);

Json to_json(const MbwParams& m);
/// Keys: alpha1 beta1 alpha2 beta2 copula rho a b x0 y0 d p. Missing keys
/// keep the value in `defaults`; unknown keys are rejected.
MbwParams mbw_params_from_json(const Json& j, const MbwParams& defaults);

Json to_json(const FitResult& r);
Json to_json(const BootstrapResult& b);
Json to_json(const StudyConfig& c);
StudyConfig study_config_from_json(const Json& j);
Json to_json(const StudyReport& r);

/// 64-bit FNV-1a digest as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

struct RunManifest {
  std::string command;
  Json parameters;
  std::optional<std::uint64_t> seed;
  std::string input_digest;
};

/// Timestamp is SOURCE_DATE_EPOCH when set (for reproducible output), else
/// the current UTC time.
Json manifest_json(const RunManifest& m);
std::string manifest_path_for(const std::string& output_path);

/// Library version string.
std::string version();

}  // namespace mbw

#endif  // MBW_IO_HPP
