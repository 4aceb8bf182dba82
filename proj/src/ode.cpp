#include "slowdecay/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "slowdecay/error.hpp"

namespace slowdecay {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 0.2, c3 = 0.3, c4 = 0.8, c5 = 8.0 / 9.0;
constexpr double a21 = 0.2;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                 a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0,
                 a74 = 125.0 / 192.0, a75 = -2187.0 / 6784.0,
                 a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0,
                 e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                 e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
constexpr double d1 = -12715105075.0 / 11282082432.0,
                 d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0,
                 d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0,
                 d7 = 69997945.0 / 29380423.0;

// Step control.
constexpr double kSafe = 0.9;
constexpr double kBeta = 0.04;
constexpr double kExpo1 = 0.2 - kBeta * 0.75;
constexpr double kFacMaxInv = 0.1;  // growth at most 10x
constexpr double kFacMinInv = 5.0;  // shrink at most 5x

State axpy(const State& y, double h, const State& k) {
  return {y[0] + h * k[0], y[1] + h * k[1]};
}

std::string str(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

std::string to_string(Coordinates c) {
  switch (c) {
    case Coordinates::radial: return "radial";
    case Coordinates::emden_fowler: return "emden_fowler";
    case Coordinates::linear: return "linear";
  }
  return "?";
}

std::string to_string(Direction d) {
  return d == Direction::increasing ? "increasing" : "decreasing";
}

std::string to_string(Termination::Kind kind) {
  switch (kind) {
    case Termination::Kind::reached_target: return "reached_target";
    case Termination::Kind::positivity_lost: return "positivity_lost";
    case Termination::Kind::step_underflow: return "step_underflow";
    case Termination::Kind::max_steps: return "max_steps";
  }
  return "?";
}

State DenseSegment::eval(double x) const {
  const double theta = (x - x0) / h;
  const double theta1 = 1.0 - theta;
  State out;
  for (int i = 0; i < 2; ++i)
    out[i] = c[0][i] +
             theta * (c[1][i] +
                      theta1 * (c[2][i] +
                                theta * (c[3][i] + theta1 * c[4][i])));
  return out;
}

Trajectory::Trajectory(Coordinates coordinates, Direction direction,
                       std::vector<Sample> samples,
                       std::vector<DenseSegment> segments,
                       Termination termination, IntegratorStats stats)
    : coordinates_(coordinates),
      direction_(direction),
      samples_(std::move(samples)),
      segments_(std::move(segments)),
      termination_(termination),
      stats_(stats) {
  if (samples_.empty())
    fail(ErrorKind::InvalidParameters, "trajectory needs at least one sample");
}

double Trajectory::lo() const {
  return direction_ == Direction::increasing ? samples_.front().x
                                             : samples_.back().x;
}

double Trajectory::hi() const {
  return direction_ == Direction::increasing ? samples_.back().x
                                             : samples_.front().x;
}

Sample Trajectory::at(double x) const {
  if (!covers(x))
    fail(ErrorKind::InsufficientCoverage,
         "x=" + str(x) + " outside trajectory range [" + str(lo()) + ", " +
             str(hi()) + "]");
  if (segments_.empty()) return {x, samples_.front().y, samples_.front().dy};
  const bool inc = direction_ == Direction::increasing;
  // first segment whose end passes x
  auto it = std::lower_bound(
      segments_.begin(), segments_.end(), x,
      [inc](const DenseSegment& s, double v) {
        return inc ? s.x1() < v : s.x1() > v;
      });
  if (it == segments_.end()) it = std::prev(segments_.end());
  const State s = it->eval(x);
  return {x, s[0], s[1]};
}

std::vector<Sample> Trajectory::at(std::span<const double> xs) const {
  std::vector<Sample> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(at(x));
  return out;
}

void Trajectory::require_complete() const {
  switch (termination_.kind) {
    case Termination::Kind::reached_target: return;
    case Termination::Kind::positivity_lost:
      fail(ErrorKind::PositivityLost,
           "solution lost positivity at x=" + str(termination_.at));
    case Termination::Kind::step_underflow:
      fail(ErrorKind::StepUnderflow,
           "step size underflow at x=" + str(termination_.at));
    case Termination::Kind::max_steps:
      fail(ErrorKind::MaxSteps,
           "step limit reached at x=" + str(termination_.at));
  }
}

Trajectory integrate_second_order(Coordinates coordinates,
                                  const SecondOrderSystem& system,
                                  Sample start, double x_target,
                                  const IntegrateOptions& options) {
  if (!(x_target != start.x) || !std::isfinite(x_target))
    fail(ErrorKind::InvalidParameters, "integration target equals start");
  if (!(options.tol.rel >= 1e-13) || !(options.tol.abs > 0.0))
    fail(ErrorKind::InvalidParameters, "tolerance must have rel >= 1e-13, abs > 0");
  const double dir = x_target > start.x ? 1.0 : -1.0;
  const Direction direction =
      dir > 0 ? Direction::increasing : Direction::decreasing;
  const double atol = options.tol.abs, rtol = options.tol.rel;

  IntegratorStats stats;
  stats.tol = options.tol;
  auto f = [&](double x, const State& y) -> State {
    ++stats.rhs_evaluations;
    return {y[1], system.accel(x, y[0], y[1])};
  };
  auto weight = [&](double x) {
    return system.derivative_weight ? std::abs(system.derivative_weight(x))
                                    : 1.0;
  };
  auto norm = [&](double x, const State& y0, const State& y1, const State& e) {
    const double w[2] = {1.0, weight(x)};
    double sum = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double sk =
          atol + rtol * std::max(std::abs(w[i] * y0[i]), std::abs(w[i] * y1[i]));
      const double q = w[i] * e[i] / sk;
      sum += q * q;
    }
    return std::sqrt(0.5 * sum);
  };

  double x = start.x;
  State y{start.y, start.dy};
  State k1 = f(x, y);
  const double span = std::abs(x_target - x);
  const double h_max = std::min(options.h_max, span);

  // initial step (Hairer & Wanner, hinit)
  double h = std::abs(options.h_initial);
  if (h == 0.0) {
    const double w[2] = {1.0, weight(x)};
    double dnf = 0.0, dny = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double sk = atol + rtol * std::abs(w[i] * y[i]);
      dnf += std::pow(w[i] * k1[i] / sk, 2);
      dny += std::pow(w[i] * y[i] / sk, 2);
    }
    h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 * std::max(1.0, std::abs(x))
                                       : 0.01 * std::sqrt(dny / dnf);
    h = std::min(h, h_max);
    if (coordinates == Coordinates::radial) h = std::min(h, 0.1 * std::abs(x));
    const State y1 = axpy(y, dir * h, k1);
    const State f1 = f(x + dir * h, y1);
    double der2 = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double sk = atol + rtol * std::abs(w[i] * y[i]);
      der2 += std::pow(w[i] * (f1[i] - k1[i]) / sk, 2);
    }
    der2 = std::sqrt(der2) / h;
    const double der12 = std::max(der2, std::sqrt(dnf));
    const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3)
                                     : std::pow(0.01 / der12, 0.2);
    h = std::min({100.0 * h, h1, h_max});
    if (coordinates == Coordinates::radial) h = std::min(h, 0.1 * std::abs(x));
  }
  h *= dir;

  std::vector<Sample> samples{{x, y[0], y[1]}};
  std::vector<DenseSegment> segments;
  Termination termination{Termination::Kind::reached_target, x_target};
  double facold = 1e-4;
  bool rejected_last = false;
  const bool watch_positivity = options.positivity_event && y[0] > options.tol_pos;

  while (true) {
    if (stats.accepted + stats.rejected >= options.max_steps) {
      termination = {Termination::Kind::max_steps, x};
      break;
    }
    if (std::abs(h) < options.underflow_factor *
                          std::max(std::abs(x), 1e-300)) {
      termination = {Termination::Kind::step_underflow, x};
      break;
    }
    bool last = false;
    if ((x + h - x_target) * dir >= 0.0) {
      h = x_target - x;
      last = true;
    }

    const State k2 = f(x + c2 * h, axpy(y, h * a21, k1));
    const State y3{y[0] + h * (a31 * k1[0] + a32 * k2[0]),
                   y[1] + h * (a31 * k1[1] + a32 * k2[1])};
    const State k3 = f(x + c3 * h, y3);
    State tmp;
    for (int i = 0; i < 2; ++i)
      tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    const State k4 = f(x + c4 * h, tmp);
    for (int i = 0; i < 2; ++i)
      tmp[i] = y[i] +
               h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    const State k5 = f(x + c5 * h, tmp);
    for (int i = 0; i < 2; ++i)
      tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                           a64 * k4[i] + a65 * k5[i]);
    const double x_new = last ? x_target : x + h;
    const State k6 = f(x + h, tmp);
    State y1;
    for (int i = 0; i < 2; ++i)
      y1[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] +
                          a75 * k5[i] + a76 * k6[i]);
    const State k7 = f(x_new, y1);
    State e;
    for (int i = 0; i < 2; ++i)
      e[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                  e6 * k6[i] + e7 * k7[i]);
    double err = norm(x_new, y, y1, e);
    if (!std::isfinite(err)) err = 1e10;

    const double fac11 = std::pow(err, kExpo1);
    if (err <= 1.0) {
      double fac = fac11 / std::pow(facold, kBeta);
      fac = std::max(kFacMaxInv, std::min(kFacMinInv, fac / kSafe));
      double h_new = h / fac;
      facold = std::max(err, 1e-4);
      ++stats.accepted;
      stats.error_estimate += std::abs(e[0]);

      DenseSegment seg;
      seg.x0 = x;
      seg.h = h;
      for (int i = 0; i < 2; ++i) {
        const double ydiff = y1[i] - y[i];
        const double bspl = h * k1[i] - ydiff;
        seg.c[0][i] = y[i];
        seg.c[1][i] = ydiff;
        seg.c[2][i] = bspl;
        seg.c[3][i] = ydiff - h * k7[i] - bspl;
        seg.c[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                           d6 * k6[i] + d7 * k7[i]);
      }
      segments.push_back(seg);

      if (watch_positivity && y1[0] <= options.tol_pos) {
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (seg.eval(x + mid * h)[0] > options.tol_pos)
            lo = mid;
          else
            hi = mid;
        }
        const double xc = hi == 1.0 ? x_new : x + hi * h;
        State yc = hi == 1.0 ? y1 : seg.eval(xc);
        yc[0] = std::min(yc[0], options.tol_pos);
        samples.push_back({xc, yc[0], yc[1]});
        termination = {Termination::Kind::positivity_lost, xc};
        break;
      }

      samples.push_back({x_new, y1[0], y1[1]});
      k1 = k7;
      y = y1;
      x = x_new;
      if (last) break;
      if (std::abs(h_new) > h_max) h_new = dir * h_max;
      if (rejected_last) h_new = dir * std::min(std::abs(h_new), std::abs(h));
      if (coordinates == Coordinates::radial && dir < 0)
        h_new = dir * std::min(std::abs(h_new), 0.5 * std::abs(x));
      rejected_last = false;
      h = h_new;
    } else {
      ++stats.rejected;
      h = h / std::min(kFacMinInv, fac11 / kSafe);
      rejected_last = true;
    }
  }
  return Trajectory(coordinates, direction, std::move(samples),
                    std::move(segments), termination, stats);
}

}  // namespace slowdecay
