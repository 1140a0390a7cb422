#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "singlab/config.hpp"
#include "singlab/io.hpp"

namespace singlab::cli {

enum ExitCode : int { ok = 0, nonexistence = 2, no_convergence = 3, config_error = 4 };

const std::vector<std::string>& subcommands();

struct Outcome {
  int exit_code = ok;
  std::string status;
  Json results;
  std::string message;
  /// Non-deterministic extras (timings) for metadata.json.
  Json metadata;
};

/// Runs one subcommand and writes its artifacts, summary.json and, on
/// failure, diagnostic.json into `out`.  Timing goes to metadata.json.
/// Invalid parameter combinations raise ConfigError.
Outcome run(const std::string& subcommand, const Config& config, const std::filesystem::path& out, std::ostream& log);

/// Writes the diagnostic record for a failure that happened before or
/// outside `run` (for example a config error).
void write_diagnostic(const std::filesystem::path& out, const std::string& subcommand, int exit_code,
                      const std::string& message);

}  // namespace singlab::cli
