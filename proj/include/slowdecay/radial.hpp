#pragma once

#include <functional>
#include <span>
#include <vector>

#include "slowdecay/ode.hpp"
#include "slowdecay/problem.hpp"

namespace slowdecay {

struct RadialState {
  double r = 0.0;
  double u = 0.0;
  double du = 0.0;
};

/// u'' for the radial equation. Throws NegativeBase for u < 0 with
/// non-integer p.
double rhs_radial(const ProblemParams& params, double r, double u, double du);

/// Forcing leading term (b, d) with f ~ b r^-d at the origin; nullopt when
/// the problem is unforced.
struct ForcingLead {
  double b = 0.0;
  double d = 0.0;
};
std::optional<ForcingLead> forcing_lead(const ProblemParams& params);

/// Two-term expansion of the regular solution with u(0) = alpha at radius
/// r0. r0 is halved until the leading neglected term drops below
/// 1e-12 alpha; the returned state carries the radius actually used.
RadialState series_start(const ProblemParams& params,
                         const DerivedConstants& constants, double alpha,
                         double r0 = 1e-6);

struct RadialOptions {
  Tolerance tol;
  bool positivity_event = true;
  std::size_t max_steps = 2'000'000;
  double h_max = kInfinity;
};

Trajectory integrate_radial(const ProblemParams& params, RadialState start,
                            double r_target, const RadialOptions& options = {});

/// Regular solution from the series start at r0 out to r_target.
Trajectory regular_radial(const ProblemParams& params,
                          const DerivedConstants& constants, double alpha,
                          double r_target, const RadialOptions& options = {},
                          double r0 = 1e-6);

struct IntegralResidual {
  double max_abs = 0.0;
  /// max_abs divided by max |u| over the checked range
  double max_rel = 0.0;
  double at = 0.0;
};

/// Defect of the integrated form
///   u(r) - u(R) = int_r^R t^(1-n) [C0 + int_{r_min}^t (K u^p + mu f) s^(n-1) ds] dt
/// with C0 = -r_min^(n-1) u'(r_min), evaluated at every trajectory sample in
/// [r_min, R]. The integrals use 5-point Gauss rules on the dense output.
IntegralResidual integral_residual(const ProblemParams& params,
                                   const Trajectory& trajectory, double R);

/// Same, for an arbitrary state function sampled at the given increasing
/// nodes (the first node is r_min, the last is R).
IntegralResidual integral_residual(
    const ProblemParams& params,
    const std::function<RadialState(double)>& state,
    std::span<const double> nodes);

/// u values of a radial trajectory on a grid.
std::vector<double> radial_values(const Trajectory& trajectory,
                                  std::span<const double> grid);

/// n log-spaced points on [lo, hi].
std::vector<double> log_grid(double lo, double hi, std::size_t n);

}  // namespace slowdecay
