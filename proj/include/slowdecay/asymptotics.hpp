#pragma once

#include <optional>
#include <string>
#include <vector>

#include "slowdecay/ode.hpp"
#include "slowdecay/problem.hpp"

namespace slowdecay {

struct BoundEstimate {
  double C_est = 0.0;       ///< max of u r^m on (r_lo, R]
  double at = 0.0;          ///< radius of the maximum
  double decade_increase = 0.0;  ///< relative growth of the running max over the decade nearest 0
  bool stabilized = false;
  double r_lo = 0.0;
  double R = 0.0;
};

/// Running max of u r^m from R down to the trajectory's smallest radius.
/// Accepts radial or EF trajectories. InsufficientCoverage unless the
/// trajectory reaches r <= 1e-3 R.
BoundEstimate apriori_bound_check(const DerivedConstants& c,
                                  const Trajectory& trajectory, double R);

enum class RateClass { power, logarithmic, bounded };
std::string to_string(RateClass c);

struct FitWindow {
  double lo = 1e-5;
  double hi = 1e-2;
  std::size_t points = 40;
};

struct RateFit {
  RateClass rate_class = RateClass::bounded;
  /// power: slope of log u vs log r; logarithmic: slope of u vs |log r|;
  /// bounded: (sup - inf) / level over the decade nearest 0
  double exponent = 0.0;
  double intercept = 0.0;
  /// power: RMS in log u; logarithmic: RMS of u relative to its window mean
  double residual = 0.0;
  double expected = 0.0;  ///< -(d-2) for power, 0 otherwise
  FitWindow window;
};

/// Class chosen by the declared d: 2 < d < m+2 power, d == 2 logarithmic,
/// d < 2 bounded. NotApplicable for d >= m+2, WindowTooShort when the
/// trajectory does not cover the window or the window spans < 3 decades.
RateFit fit_rate(const DerivedConstants& c, const Trajectory& trajectory,
                 double d, const FitWindow& window = {});

struct ManufacturedForcing {
  CoefficientProfile f = CoefficientProfile::zero();
  bool zero_forcing = false;
  /// (0, positive_up_to) is where f > 0
  double positive_up_to = 0.0;
  std::optional<double> b;
  std::optional<double> d;
};

/// f = -(u*'' + (n-1)/r u*' + K u*^p) for use with mu = 1. Exact
/// homogeneous solutions are reported as zero forcing with f the zero
/// profile. NonpositiveForcing when f <= 0 near 0.
ManufacturedForcing manufactured_forcing(double n, double p,
                                         const CoefficientProfile& K,
                                         const ReferenceSolution& u_star);

}  // namespace slowdecay
