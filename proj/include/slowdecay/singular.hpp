#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slowdecay/emden_fowler.hpp"

namespace slowdecay {

enum class SweepEngine { emden_fowler, radial };
std::string to_string(SweepEngine e);

struct SweepOptions {
  Tolerance tol;
  SweepEngine engine = SweepEngine::emden_fowler;
  /// converged when the relative sup gap of the last two levels is below this
  double convergence_tol = 1e-2;
  /// Aitken extrapolation of the last three levels (off by default)
  bool extrapolate = false;
  bool parallel = true;
};

struct ExcludedAlpha {
  double alpha = 0.0;
  std::string reason;
  std::optional<double> lost_at;  ///< radius where positivity was lost
};

struct SweepResult {
  std::vector<double> grid;
  std::vector<double> alphas;  ///< admissible levels, ascending
  std::vector<std::vector<double>> values;  ///< values[i][j] = u_alpha_i(grid_j)
  std::vector<ExcludedAlpha> excluded;
  std::size_t monotonicity_violations = 0;
  /// relative sup gap between consecutive levels
  std::vector<double> gaps;
  std::vector<double> envelope;
  std::optional<std::vector<double>> extrapolated;
  double sup_gap = kInfinity;
  bool converged = false;
  std::optional<double> smallest_admissible_alpha;
  /// root matched by r^m U at the smallest grid radius (5% tolerance)
  LimitClass envelope_class = LimitClass::unresolved;
};

SweepResult alpha_sweep(const ProblemParams& params, const DerivedConstants& c,
                        std::span<const double> ladder,
                        std::span<const double> grid,
                        const SweepOptions& options = {});

/// alpha = 2^k, k = 0..max_exp
std::vector<double> geometric_ladder(int max_exp);

struct BoundCheck {
  bool holds = true;
  double max_ratio = 0.0;  ///< max of r^m u (r^-l K)^(1/(p-1)) / L
  double at = 0.0;
};

BoundCheck verify_bound(const ProblemParams& params, const DerivedConstants& c,
                        std::span<const double> grid,
                        std::span<const double> values);

struct DirectOptions {
  double t_start = -20.0;
  double t_end = 2.302585092994046;  ///< log 10
  double perturbation = 1e-8;
  EFOptions ef;
};

struct DirectConstruction {
  Trajectory trajectory;
  double seed_root = 0.0;
  int sign = 0;              ///< +1 or -1 branch kept (0 for zero perturbation)
  std::string mode;          ///< "sink" or "saddle"
  Linearization linearization;
  double max_bound_ratio = 0.0;
};

/// Seeds at the nonzero root plus a small perturbation along the slow
/// eigenvector (sink) or the unstable one (saddle) and integrates forward in
/// t. ConstructionInapplicable when the root repels in both directions.
DirectConstruction construct_singular_direct(const ProblemParams& params,
                                             const DerivedConstants& c,
                                             const DirectOptions& options = {});

struct SingularCandidate {
  std::vector<double> values;  ///< u on the shared grid
  LimitClass limit_class = LimitClass::unresolved;
};

struct UniquenessReport {
  double distance = 0.0;  ///< max relative |u1 - u2| / u2
  std::vector<double> t;
  std::vector<double> h;  ///< v1 / v2
  double h_max_dev = 0.0;
  bool consistent = false;
};

UniquenessReport uniqueness_crosscheck(const DerivedConstants& c,
                                       const SingularCandidate& first,
                                       const SingularCandidate& second,
                                       std::span<const double> grid,
                                       double threshold = 1e-2);

/// U(r) = coef r^-m for pure-power K and no forcing.
struct ClosedFormSingular {
  double coef = 0.0;
  double exponent = 0.0;  ///< m

  double value(double r) const { return coef * std::pow(r, -exponent); }
  double d1(double r) const { return -exponent * value(r) / r; }
  double d2(double r) const {
    return exponent * (exponent + 1.0) * value(r) / (r * r);
  }
};

/// NotApplicable unless K is a pure power k0 r^l and the problem is unforced.
ClosedFormSingular closed_form_singular(const ProblemParams& params,
                                        const DerivedConstants& c);

/// Max normalised substitution residual of the closed form at `count`
/// log-uniform random radii in [1e-3, 1e3].
double closed_form_residual(const ProblemParams& params,
                            const ClosedFormSingular& U, std::size_t count = 100,
                            unsigned seed = 7);

/// max_r |u_alpha(r) - alpha u_1(alpha^(1/m) r)| / u_alpha(r) on the grid,
/// both integrated in radial variables.
double scaling_deviation(const ProblemParams& params, const DerivedConstants& c,
                         double alpha, std::span<const double> grid,
                         const RadialOptions& options = {});

}  // namespace slowdecay
