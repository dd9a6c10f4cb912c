#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bjacobi/cli/config.hpp"
#include "bjacobi/cli/output.hpp"

namespace bjacobi::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInvalid = 1,
  kExitFailed = 2,
  kExitRuntime = 3,
};

/// Parses a command line (without the program name). Throws Error(Config)
/// on bad flags or an unreadable config file; --help is reported through
/// the returned flag.
struct ParseResult {
  RunConfig config;
  bool help = false;
  std::string help_text;
};
ParseResult parse_args(const std::vector<std::string>& args);

/// Runs one command, writes its files under config.out_dir and returns the summary.
Summary execute(const RunConfig& config, std::ostream& log);

/// Full front end: parse, validate, execute, map errors to exit codes.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bjacobi::cli
