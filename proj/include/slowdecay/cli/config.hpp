#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "slowdecay/ode.hpp"
#include "slowdecay/problem.hpp"

namespace slowdecay::cli {

using json = nlohmann::json;

struct GridConfig {
  double lo = 0.1;
  double hi = 10.0;
  std::size_t n = 50;
};

/// Command-line overrides; unset fields leave the config value alone.
struct Overrides {
  std::optional<std::string> out;
  std::optional<double> tol_rel;
  std::optional<double> tol_abs;
  std::optional<double> grid_lo;
  std::optional<double> grid_hi;
  std::optional<std::size_t> grid_n;
  std::optional<int> ladder_max_exp;
  bool allow_fractional_n = false;
};

/// A validated experiment description. Unknown keys anywhere are rejected
/// with ConfigError before anything is computed. Precedence: command-line
/// flags, then the config document, then built-in defaults.
class ExperimentConfig {
 public:
  static ExperimentConfig from_json(const json& doc, const Overrides& flags = {});
  static ExperimentConfig from_file(const std::string& path,
                                    const Overrides& flags = {});

  const json& document() const { return doc_; }
  /// Normalised document with defaults and overrides applied.
  json resolved() const;

  ProblemParams problem() const;
  Tolerance tolerance() const { return tol_; }
  GridConfig grid() const { return grid_; }
  std::vector<double> grid_points() const;
  const std::vector<double>& ladder() const { return ladder_; }
  const std::string& output_dir() const { return output_dir_; }
  unsigned seed() const { return seed_; }

  /// Command block (empty object when absent).
  const json& section(const std::string& name) const;

 private:
  json doc_;
  Tolerance tol_;
  GridConfig grid_;
  std::vector<double> ladder_;
  std::string output_dir_ = "out";
  unsigned seed_ = 7;
};

CoefficientProfile profile_from_json(const json& spec, double n, double p,
                                     const CoefficientProfile* K);

}  // namespace slowdecay::cli
