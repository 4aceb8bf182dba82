#include "slowdecay/emden_fowler.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "slowdecay/error.hpp"
#include "slowdecay/power.hpp"
#include "slowdecay/quadrature.hpp"

namespace slowdecay {

namespace {

std::string str(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

/// Bound on the fastest linearised rate anywhere in 0 <= v <= z2.
double fastest_rate(const ProblemParams& params, const DerivedConstants& c) {
  const double stiff = c.Lp1 * std::max(1.0, params.p() - 1.0);
  return 0.5 * (std::abs(c.a) + std::sqrt(c.a * c.a + 4.0 * (c.Lp1 + stiff)));
}

}  // namespace

EFState to_ef(const DerivedConstants& c, const RadialState& s) {
  const double rm = std::pow(s.r, c.m);
  return {std::log(s.r), rm * s.u, rm * s.r * s.du + c.m * rm * s.u};
}

RadialState from_ef(const DerivedConstants& c, const EFState& e) {
  const double r = std::exp(e.t);
  const double rm = std::exp(-c.m * e.t);  // r^-m
  return {r, rm * e.v, rm / r * (e.dv - c.m * e.v)};
}

double k_of_t(const ProblemParams& params, double t) {
  return params.K().weighted(std::exp(t), -params.l());
}

double dk_of_t(const ProblemParams& params, double t) {
  return params.K().weighted_log_derivative(std::exp(t), -params.l());
}

double g_of_t(const ProblemParams& params, const DerivedConstants& c, double t) {
  if (params.unforced()) return 0.0;
  return params.mu() * params.f().weighted(std::exp(t), c.m + 2.0);
}

double dg_of_t(const ProblemParams& params, const DerivedConstants& c,
               double t) {
  if (params.unforced()) return 0.0;
  return params.mu() * params.f().weighted_log_derivative(std::exp(t), c.m + 2.0);
}

double rhs_ef(const ProblemParams& params, const DerivedConstants& c, double t,
              double v, double dv) {
  if (v < 0.0 && !is_integer_exponent(params.p()))
    fail(ErrorKind::NegativeBase,
         "v=" + str(v) + " < 0 with non-integer p=" + str(params.p()));
  return -c.a * dv + c.Lp1 * v - k_of_t(params, t) * power(v, params.p()) -
         g_of_t(params, c, t);
}

Trajectory integrate_ef(const ProblemParams& params, const DerivedConstants& c,
                        EFState start, double t_target,
                        const EFOptions& options) {
  const double p = params.p();
  const bool forced = !params.unforced();
  SecondOrderSystem sys;
  sys.accel = [&params, &c, p, forced](double t, double v, double dv) {
    double ddv = -c.a * dv + c.Lp1 * v - k_of_t(params, t) * clamped_power(v, p);
    if (forced) ddv -= g_of_t(params, c, t);
    return ddv;
  };
  IntegrateOptions opt;
  opt.tol = options.tol;
  opt.positivity_event = options.positivity_event;
  opt.max_steps = options.max_steps;
  opt.h_max = options.h_max > 0.0
                  ? options.h_max
                  : std::min(0.25, 2.0 / fastest_rate(params, c));
  opt.tol_pos = kTolPos;
  return integrate_second_order(Coordinates::emden_fowler, sys,
                                {start.t, start.v, start.dv}, t_target, opt);
}

Trajectory regular_ef(const ProblemParams& params, const DerivedConstants& c,
                      double alpha, double t_min, double t_max,
                      const EFOptions& options) {
  const RadialState s = series_start(params, c, alpha, std::exp(t_min));
  return integrate_ef(params, c, to_ef(c, s), t_max, options);
}

std::vector<double> ef_radial_values(const DerivedConstants& c,
                                     const Trajectory& trajectory,
                                     std::span<const double> grid) {
  std::vector<double> out;
  out.reserve(grid.size());
  for (double r : grid) {
    const double t = std::log(r);
    out.push_back(std::exp(-c.m * t) * trajectory.at(t).y);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Energy

double energy(const ProblemParams& params, const DerivedConstants& c,
              const EFState& e, double b) {
  const double p = params.p();
  return 0.5 * e.dv * e.dv - 0.5 * c.Lp1 * e.v * e.v +
         k_of_t(params, e.t) * power(e.v, p + 1.0) / (p + 1.0) + b * e.v;
}

EnergyTrace energy_trace(const ProblemParams& params, const DerivedConstants& c,
                         const Trajectory& trajectory, double b,
                         double slack) {
  if (trajectory.coordinates() != Coordinates::emden_fowler)
    fail(ErrorKind::InvalidParameters, "energy needs an EF trajectory");
  const double p = params.p();
  EnergyTrace out;
  for (const auto& s : trajectory.samples()) out.t.push_back(s.x);
  std::sort(out.t.begin(), out.t.end());
  out.t.erase(std::unique(out.t.begin(), out.t.end()), out.t.end());
  const std::size_t N = out.t.size();
  if (N < 2) fail(ErrorKind::InsufficientCoverage, "trajectory too short");

  auto state = [&](double t) {
    const Sample s = trajectory.at(t);
    return EFState{t, s.y, s.dy};
  };
  out.E.resize(N);
  for (std::size_t i = 0; i < N; ++i) out.E[i] = energy(params, c, state(out.t[i]), b);

  // piecewise integrals between anchors
  std::vector<double> diss(N - 1), gterm(N - 1), kterm(N - 1);
  const bool forced = !params.unforced();
  for (std::size_t i = 0; i + 1 < N; ++i) {
    const double a = out.t[i], bb = out.t[i + 1];
    diss[i] = quadrature::gauss5(
        [&](double t) {
          const double dv = trajectory.at(t).dy;
          return dv * dv;
        },
        a, bb);
    gterm[i] = forced ? quadrature::gauss5(
                            [&](double t) {
                              return dg_of_t(params, c, t) * trajectory.at(t).y;
                            },
                            a, bb)
                      : 0.0;
    kterm[i] = quadrature::gauss5(
        [&](double t) {
          return dk_of_t(params, t) * power(std::max(trajectory.at(t).y, 0.0), p + 1.0);
        },
        a, bb);
  }

  const double T = out.t.back();
  const double vT = state(T).v;
  const double gT = g_of_t(params, c, T);
  out.residual.assign(N, 0.0);
  out.dissipation.assign(N, 0.0);
  double D = 0.0, G = 0.0, Kint = 0.0;
  for (std::size_t i = N; i-- > 0;) {
    if (i + 1 < N) {
      D += diss[i];
      G += gterm[i];
      Kint += kterm[i];
    }
    const double t = out.t[i];
    const double v = state(t).v;
    const double defect = out.E[i] - out.E[N - 1] - c.a * D +
                          (g_of_t(params, c, t) - b) * v - (gT - b) * vT + G +
                          Kint / (p + 1.0);
    out.residual[i] = std::abs(defect);
    out.dissipation[i] = c.a * D;
    out.max_residual = std::max(out.max_residual, out.residual[i]);
  }
  for (std::size_t i = 0; i + 1 < N; ++i)
    if (out.E[i + 1] > out.E[i] + slack * std::max(1.0, std::abs(out.E[i])))
      ++out.monotonicity_violations;
  const bool autonomous_k = params.K().is_pure_power();
  const bool constant_g =
      params.unforced() ||
      (params.f().is_pure_power() && c.regime == ForcingRegime::critical);
  out.monotone_claimed = c.a > 0.0 && autonomous_k && constant_g;
  return out;
}

double energy_identity_residual(const ProblemParams& params,
                                const DerivedConstants& c,
                                const Trajectory& trajectory, double b) {
  return energy_trace(params, c, trajectory, b).max_residual;
}

// ---------------------------------------------------------------------------
// Classification

std::string to_string(LimitClass c) {
  switch (c) {
    case LimitClass::zero: return "zero";
    case LimitClass::z1: return "z1";
    case LimitClass::z2: return "z2";
    case LimitClass::z_star: return "z_star";
    case LimitClass::unresolved: return "unresolved";
  }
  return "?";
}

namespace {

struct Window {
  double lo, hi;
  double mean = 0.0, vmin = kInfinity, vmax = -kInfinity, dv_max = 0.0;
};

Window terminal_window(const Trajectory& tr) {
  const double lo = tr.lo();
  if (lo > kMaxWindowStart || tr.hi() - lo < kMinSpan)
    fail(ErrorKind::InsufficientCoverage,
         "classification needs t reaching " + str(kMaxWindowStart) +
             " and a span of " + str(kMinSpan) + "; trajectory covers [" +
             str(lo) + ", " + str(tr.hi()) + "]");
  Window w{lo, lo + kWindowLength};
  const int N = 401;
  double sum = 0.0;
  for (int i = 0; i < N; ++i) {
    const double t = w.lo + (w.hi - w.lo) * i / (N - 1);
    const Sample s = tr.at(t);
    sum += s.y;
    w.vmin = std::min(w.vmin, s.y);
    w.vmax = std::max(w.vmax, s.y);
    w.dv_max = std::max(w.dv_max, std::abs(s.dy));
  }
  w.mean = sum / N;
  return w;
}

}  // namespace

bool check_v_prime_vanishes(const Trajectory& trajectory) {
  return terminal_window(trajectory).dv_max < 1e-3;
}

ClassificationReport classify_origin_limit(const ProblemParams& params,
                                           const DerivedConstants& c,
                                           const Trajectory& trajectory) {
  if (trajectory.coordinates() != Coordinates::emden_fowler)
    fail(ErrorKind::InvalidParameters, "classification needs an EF trajectory");
  if (c.k0 && c.regime == ForcingRegime::critical)
    limit_equation_roots(*c.k0, params.p(), c.Lp1, c.b);  // b > b_max is fatal
  const Window w = terminal_window(trajectory);
  ClassificationReport rep;
  rep.estimate = w.mean;
  rep.dv_tail = w.dv_max;
  rep.oscillation = w.vmax - w.vmin;
  rep.window_lo = w.lo;
  rep.window_hi = w.hi;
  rep.v_prime_vanishes = w.dv_max < 1e-3;
  rep.a = c.a;
  rep.b0 = c.a;
  rep.b = c.b;
  rep.b_max = c.b_max;

  std::vector<std::pair<LimitClass, double>> candidates;
  if (!c.k0) {
    rep.detail = "K has no positive limit r^-l K at the origin";
    return rep;
  }
  switch (c.regime) {
    case ForcingRegime::none:
      candidates = {{LimitClass::zero, 0.0},
                    {LimitClass::z2, unforced_root(*c.k0, params.p(), c.Lp1)}};
      break;
    case ForcingRegime::critical: {
      rep.admissible_b = c.b_max && c.b <= *c.b_max * (1.0 + 1e-12);
      const RootPair roots = limit_equation_roots(*c.k0, params.p(), c.Lp1, c.b);
      candidates = {{LimitClass::z1, roots.z1}, {LimitClass::z2, roots.z2}};
      break;
    }
    case ForcingRegime::subcritical:
      candidates = {{LimitClass::zero, 0.0},
                    {LimitClass::z_star, unforced_root(*c.k0, params.p(), c.Lp1)}};
      break;
    case ForcingRegime::supercritical:
      rep.detail = "forcing decay outside 0 < d <= m+2";
      return rep;
  }
  double zmax = 0.0;
  for (const auto& [cls, z] : candidates) zmax = std::max(zmax, z);
  rep.tolerance = 1e-3 * std::max(1.0, zmax);
  if (rep.oscillation > rep.tolerance) {
    rep.detail = "v still varies by " + str(rep.oscillation) + " on the window";
    return rep;
  }
  double best = kInfinity;
  for (const auto& [cls, z] : candidates) {
    const double dist = std::abs(w.mean - z);
    if (dist < rep.tolerance && dist < best) {
      best = dist;
      rep.limit_class = cls;
    }
  }
  if (rep.limit_class == LimitClass::unresolved)
    rep.detail = "window mean " + str(w.mean) + " matches no root";
  return rep;
}

Linearization linearize_ef(const ProblemParams& params,
                           const DerivedConstants& c, double z, double t) {
  const double hv = 1e-6 * std::max(1.0, std::abs(z));
  double J21;
  if (z - hv >= 0.0 || is_integer_exponent(params.p()))
    J21 = (rhs_ef(params, c, t, z + hv, 0.0) - rhs_ef(params, c, t, z - hv, 0.0)) /
          (2.0 * hv);
  else
    J21 = (rhs_ef(params, c, t, z + hv, 0.0) - rhs_ef(params, c, t, z, 0.0)) / hv;
  const double hd = 1e-6;
  const double J22 =
      (rhs_ef(params, c, t, z, hd) - rhs_ef(params, c, t, z, -hd)) / (2.0 * hd);
  // lambda^2 - J22 lambda - J21 = 0
  const double disc = J22 * J22 + 4.0 * J21;
  Linearization lin;
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    lin.re1 = 0.5 * (J22 - s);
    lin.re2 = 0.5 * (J22 + s);
  } else {
    lin.real = false;
    lin.re1 = lin.re2 = 0.5 * J22;
    lin.im1 = -0.5 * std::sqrt(-disc);
    lin.im2 = -lin.im1;
  }
  return lin;
}

}  // namespace slowdecay
