#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slowdecay/ode.hpp"
#include "slowdecay/problem.hpp"
#include "slowdecay/radial.hpp"

namespace slowdecay {

/// v = r^m u, t = log r.
struct EFState {
  double t = 0.0;
  double v = 0.0;
  double dv = 0.0;
};

EFState to_ef(const DerivedConstants& c, const RadialState& s);
RadialState from_ef(const DerivedConstants& c, const EFState& e);

/// k(t) = e^(-l t) K(e^t)
double k_of_t(const ProblemParams& params, double t);
double dk_of_t(const ProblemParams& params, double t);
/// g(t) = mu e^((m+2) t) f(e^t); zero when unforced.
double g_of_t(const ProblemParams& params, const DerivedConstants& c, double t);
double dg_of_t(const ProblemParams& params, const DerivedConstants& c, double t);

/// v'' = -a v' + Lp1 v - k(t) v^p - g(t). Throws NegativeBase like
/// rhs_radial.
double rhs_ef(const ProblemParams& params, const DerivedConstants& c, double t,
              double v, double dv);

struct EFOptions {
  Tolerance tol;
  bool positivity_event = true;
  std::size_t max_steps = 2'000'000;
  /// Cap on |h|; 0 picks min(0.25, 2/|fastest linearised rate|) so that the
  /// explicit scheme stays well damped near equilibria.
  double h_max = 0.0;
};

Trajectory integrate_ef(const ProblemParams& params, const DerivedConstants& c,
                        EFState start, double t_target,
                        const EFOptions& options = {});

/// Regular solution u_alpha in EF variables: series start at r0 =
/// e^(t_min) (shrunk if needed), integrated forward to t_max.
Trajectory regular_ef(const ProblemParams& params, const DerivedConstants& c,
                      double alpha, double t_min, double t_max,
                      const EFOptions& options = {});

/// u = e^(-m t) v on a radial grid.
std::vector<double> ef_radial_values(const DerivedConstants& c,
                                     const Trajectory& trajectory,
                                     std::span<const double> grid);

// --------------------------------------------------------------------------
// Energy

double energy(const ProblemParams& params, const DerivedConstants& c,
              const EFState& e, double b);

struct EnergyTrace {
  std::vector<double> t;
  std::vector<double> E;
  /// identity defect at each anchor, measured against the final anchor T
  std::vector<double> residual;
  /// a * int_t^T v'^2
  std::vector<double> dissipation;
  std::size_t monotonicity_violations = 0;
  double max_residual = 0.0;
  bool monotone_claimed = false;  ///< only when a > 0
};

/// Evaluates E at the trajectory samples (in increasing t) and the defect of
///   E(t) - E(T) - a int v'^2 + (g(t)-b) v(t) - (g(T)-b) v(T)
///     + int g' v + 1/(p+1) int k' v^(p+1) = 0.
EnergyTrace energy_trace(const ProblemParams& params, const DerivedConstants& c,
                         const Trajectory& trajectory, double b,
                         double slack = 1e-8);

double energy_identity_residual(const ProblemParams& params,
                                const DerivedConstants& c,
                                const Trajectory& trajectory, double b);

// --------------------------------------------------------------------------
// Classification of the origin limit

enum class LimitClass { zero, z1, z2, z_star, unresolved };
std::string to_string(LimitClass c);

struct ClassificationReport {
  LimitClass limit_class = LimitClass::unresolved;
  double estimate = 0.0;      ///< mean of v on the window
  double dv_tail = 0.0;       ///< max |v'| on the window
  double oscillation = 0.0;   ///< max v - min v on the window
  double tolerance = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  bool v_prime_vanishes = false;
  bool admissible_b = true;   ///< b <= b_max
  double b = 0.0;
  std::optional<double> b_max;
  double a = 0.0;
  /// b0 in the v' decay lemma, taken to be the damping coefficient a
  double b0 = 0.0;
  std::string detail;
};

inline constexpr double kWindowLength = 2.0;
inline constexpr double kMinSpan = 10.0;
inline constexpr double kMaxWindowStart = -8.0;

/// Trajectory must reach t <= -8 and span at least 10 units of t.
ClassificationReport classify_origin_limit(const ProblemParams& params,
                                           const DerivedConstants& c,
                                           const Trajectory& trajectory);

/// max |v'| on the terminal window below 1e-3. InsufficientCoverage when the
/// window precondition fails.
bool check_v_prime_vanishes(const Trajectory& trajectory);

/// Eigenvalues of the linearisation of rhs_ef at (z, 0) and time t, from a
/// central-difference Jacobian.
struct Linearization {
  double re1 = 0.0, im1 = 0.0;
  double re2 = 0.0, im2 = 0.0;  ///< re1 <= re2
  bool real = true;
};
Linearization linearize_ef(const ProblemParams& params,
                           const DerivedConstants& c, double z, double t);

}  // namespace slowdecay
