#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "bjacobi/integrate.hpp"
#include "bjacobi/stats.hpp"

namespace bjacobi::cli {

struct Summary {
  std::string tool = "bjacobi";
  std::string version;
  std::string command;
  /// 16 hex digits.
  std::string config_digest;
  std::uint64_t seed = 0;
  nlohmann::json config = nlohmann::json::object();
  std::vector<Estimate> estimates;
  nlohmann::json events = nlohmann::json::object();
  bool pass = false;

  bool operator==(const Summary&) const = default;
};

/// Finite doubles as numbers; inf, -inf and nan as strings.
nlohmann::json number(double v);
double number_from(const nlohmann::json& j);

std::string emit_summary(const Summary& summary);
Summary parse_summary(std::string_view text);

/// %.17g
std::string format_double(double v);

/// First line "# bjacobi <version> config_digest=<hex> seed=<seed> path=<id>",
/// then "t,<coord>_1,..." with <coord> one of lambda, phi, psi or x, then one row per recorded step.
std::string emit_trajectory(const PathRecord& path, std::string_view config_digest);

/// Writes text to path, creating parent directories. Throws Error(Io).
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace bjacobi::cli
