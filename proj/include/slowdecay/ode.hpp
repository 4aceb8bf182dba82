#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace slowdecay {

struct Tolerance {
  double rel = 1e-10;
  double abs = 1e-12;
};

enum class Coordinates { radial, emden_fowler, linear };
enum class Direction { increasing, decreasing };

std::string to_string(Coordinates c);
std::string to_string(Direction d);

struct Termination {
  enum class Kind { reached_target, positivity_lost, step_underflow, max_steps };
  Kind kind = Kind::reached_target;
  double at = 0.0;  ///< independent variable where integration stopped
};

std::string to_string(Termination::Kind kind);

/// One point of a second-order scalar trajectory: (r, u, u') or (t, v, v').
struct Sample {
  double x = 0.0;
  double y = 0.0;
  double dy = 0.0;
};

using State = std::array<double, 2>;

/// Continuous extension of one accepted step, valid on [x0, x0 + h].
struct DenseSegment {
  double x0 = 0.0;
  double h = 0.0;
  std::array<State, 5> c{};

  State eval(double x) const;
  double x1() const { return x0 + h; }
};

struct IntegratorStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evaluations = 0;
  Tolerance tol;
  /// Sum of |local error estimates| of the first component.
  double error_estimate = 0.0;
};

/// Sampled solution path with dense output. Immutable once built.
class Trajectory {
 public:
  Trajectory(Coordinates coordinates, Direction direction,
             std::vector<Sample> samples, std::vector<DenseSegment> segments,
             Termination termination, IntegratorStats stats);

  Coordinates coordinates() const { return coordinates_; }
  Direction direction() const { return direction_; }
  const std::vector<Sample>& samples() const { return samples_; }
  const std::vector<DenseSegment>& segments() const { return segments_; }
  const Termination& termination() const { return termination_; }
  const IntegratorStats& stats() const { return stats_; }

  double lo() const;
  double hi() const;
  bool covers(double x) const { return x >= lo() && x <= hi(); }
  bool reached_target() const {
    return termination_.kind == Termination::Kind::reached_target;
  }

  /// Dense-output state at x; throws InsufficientCoverage outside [lo, hi].
  Sample at(double x) const;
  std::vector<Sample> at(std::span<const double> xs) const;

  /// Throws StepUnderflow / MaxSteps / PositivityLost unless the target was
  /// reached.
  void require_complete() const;

 private:
  Coordinates coordinates_;
  Direction direction_;
  std::vector<Sample> samples_;
  std::vector<DenseSegment> segments_;
  Termination termination_;
  IntegratorStats stats_;
};

/// y'' = accel(x, y, y').
struct SecondOrderSystem {
  std::function<double(double, double, double)> accel;
  /// Weight applied to the y' component in the error norm; radial problems
  /// use x so that control acts on (u, r u').
  std::function<double(double)> derivative_weight;
};

struct IntegrateOptions {
  Tolerance tol;
  double h_initial = 0.0;  ///< 0 selects an automatic guess
  double h_max = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 2'000'000;
  bool positivity_event = false;
  double tol_pos = 1e-14;
  /// Step underflow when |h| < this * max(|x|, 1e-300).
  double underflow_factor = 1e-15;
};

/// Adaptive Dormand-Prince 5(4) with the standard 4th-order continuous
/// extension and PI step control.
Trajectory integrate_second_order(Coordinates coordinates,
                                  const SecondOrderSystem& system,
                                  Sample start, double x_target,
                                  const IntegrateOptions& options);

}  // namespace slowdecay
