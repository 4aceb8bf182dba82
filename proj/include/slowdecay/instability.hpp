#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "slowdecay/ode.hpp"

namespace slowdecay {

/// limit + amplitude * exp(-rate * t)
struct ConvergingCoefficient {
  double limit = 0.0;
  double amplitude = 0.0;
  double rate = 1.0;

  double operator()(double t) const {
    return amplitude == 0.0 ? limit : limit + amplitude * std::exp(-rate * t);
  }
};

enum class GrowthVerdict { unbounded_detected, bounded_within_horizon };
std::string to_string(GrowthVerdict v);

struct ThresholdCrossing {
  double threshold = 0.0;
  std::optional<double> time;
};

struct GrowthReport {
  std::vector<ThresholdCrossing> crossings;  ///< for 1e3 and 1e6
  double slope = 0.0;          ///< growth rate over the final unit interval
  std::optional<double> predicted;  ///< characteristic root: real largest, or b/2
  bool complex_roots = false;
  GrowthVerdict verdict = GrowthVerdict::bounded_within_horizon;
  double log_abs_final = 0.0;  ///< log |y| (or log amplitude) at the horizon
  std::string diagnostic;
};

struct LinearRun {
  /// one piece per renormalisation interval; piece i holds y / scale_i
  std::vector<Trajectory> pieces;
  std::vector<double> log_scale;
  GrowthReport report;
};

struct LinearOptions {
  Tolerance tol;
  double t0 = 0.0;
  double horizon = 5.0;
  /// rescale once |y| or |y'| exceeds this
  double renormalize_above = 1e100;
};

/// y'' - f(t) y' + g(t) y = 0 from (y0, dy0) at t0 to t0 + horizon.
LinearRun integrate_linear(const ConvergingCoefficient& f,
                           const ConvergingCoefficient& g, double y0,
                           double dy0, const LinearOptions& options = {});

}  // namespace slowdecay
