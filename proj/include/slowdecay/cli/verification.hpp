#pragma once

#include <string>
#include <vector>

#include "slowdecay/cli/config.hpp"

namespace slowdecay::cli {

struct Check {
  std::string group;
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  /// "below": value < limit, "at_most": value <= limit
  std::string relation = "below";
  bool pass = false;
  std::string detail;

  double margin() const { return limit - value; }
};

struct VerificationReport {
  std::vector<Check> checks;

  bool all_pass() const;
  std::size_t failures() const;
};

/// The full numerical acceptance suite for an unforced problem with a pure
/// power K. Auxiliary problems (forced, manufactured, linear) are built from
/// the configured n, p and K. NotApplicable for other problems.
VerificationReport verify_all(const ExperimentConfig& cfg);

json to_json(const VerificationReport& report);
/// Fixed-width summary, one row per check.
std::string summary_table(const VerificationReport& report);

}  // namespace slowdecay::cli
