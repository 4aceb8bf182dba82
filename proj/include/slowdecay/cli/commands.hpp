#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "slowdecay/cli/config.hpp"
#include "slowdecay/error.hpp"

namespace slowdecay::cli {

enum ExitCode : int {
  kSuccess = 0,
  kVerificationFailure = 1,
  kConfigFailure = 2,
  kNumericalFailure = 3,
};

const std::vector<std::string>& command_names();

int exit_code(ErrorKind kind);

/// {"error": kind, "message": ..., "command": ...} on one line.
void write_error(std::ostream& err, const std::string& command,
                 const std::string& kind, const std::string& message);

/// Runs one command, writes <out>/<command>.json (plus CSVs and a
/// <command>.meta.json sidecar with timestamps) and returns the exit code.
/// Library errors are caught and rendered on err.
int run_command(const std::string& name, const ExperimentConfig& cfg,
                std::ostream& out, std::ostream& err,
                const std::string& config_path = {});

}  // namespace slowdecay::cli
