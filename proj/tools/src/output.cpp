#include "bjacobi/cli/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>

#include "bjacobi/errors.hpp"
#include "bjacobi/version.hpp"

namespace bjacobi::cli {

using nlohmann::json;

json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double number_from(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw Error(ErrorKind::Io, "expected a number, got " + j.dump());
}

std::string emit_summary(const Summary& s) {
  json j;
  j["tool"] = s.tool;
  j["version"] = s.version;
  j["command"] = s.command;
  j["config_digest"] = s.config_digest;
  j["seed"] = s.seed;
  j["config"] = s.config;
  j["estimates"] = json::array();
  for (const auto& e : s.estimates) {
    j["estimates"].push_back({{"name", e.name},
                              {"value", number(e.value)},
                              {"std_error", number(e.std_error)},
                              {"ci_level", number(e.ci_level)},
                              {"n", e.n_samples}});
  }
  j["events"] = s.events;
  j["pass"] = s.pass;
  return j.dump(2) + "\n";
}

Summary parse_summary(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Io, std::string("malformed summary: ") + e.what());
  }
  try {
    Summary s;
    s.tool = j.at("tool").get<std::string>();
    s.version = j.at("version").get<std::string>();
    s.command = j.at("command").get<std::string>();
    s.config_digest = j.at("config_digest").get<std::string>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.config = j.at("config");
    for (const auto& e : j.at("estimates")) {
      Estimate est;
      est.name = e.at("name").get<std::string>();
      est.value = number_from(e.at("value"));
      est.std_error = number_from(e.at("std_error"));
      est.ci_level = number_from(e.at("ci_level"));
      est.n_samples = e.at("n").get<std::size_t>();
      s.estimates.push_back(std::move(est));
    }
    s.events = j.at("events");
    s.pass = j.at("pass").get<bool>();
    return s;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Io, std::string("malformed summary: ") + e.what());
  }
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string emit_trajectory(const PathRecord& path, std::string_view config_digest) {
  std::string out = "# bjacobi ";
  out += kVersion;
  out += " config_digest=";
  out += config_digest;
  out += " seed=" + std::to_string(path.seed);
  out += " path=" + std::to_string(path.path_id);
  out += "\nt";
  const std::size_t n = path.states.empty() ? 0 : path.states.front().size();
  const std::string prefix(to_string(path.coord));
  for (std::size_t i = 0; i < n; ++i) out += "," + prefix + "_" + std::to_string(i + 1);
  out += '\n';
  for (std::size_t r = 0; r < path.states.size(); ++r) {
    out += format_double(path.times[r]);
    for (double v : path.states[r].values) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  f.close();
  if (!f) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace bjacobi::cli
