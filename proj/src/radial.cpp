#include "slowdecay/radial.hpp"

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

double source(const ProblemParams& params, double r, double u) {
  double s = params.K().value(r) * clamped_power(u, params.p());
  if (!params.unforced()) s += params.mu() * params.f().value(r);
  return s;
}

}  // namespace

double rhs_radial(const ProblemParams& params, double r, double u, double du) {
  if (!(r > 0.0)) fail(ErrorKind::DomainError, "radius must be positive");
  if (u < 0.0 && !is_integer_exponent(params.p()))
    fail(ErrorKind::NegativeBase,
         "u=" + str(u) + " < 0 with non-integer p=" + str(params.p()));
  double ddu = -(params.n() - 1.0) / r * du -
               params.K().value(r) * power(u, params.p());
  if (!params.unforced()) ddu -= params.mu() * params.f().value(r);
  return ddu;
}

std::optional<ForcingLead> forcing_lead(const ProblemParams& params) {
  if (params.unforced()) return std::nullopt;
  const auto lead = params.f().at_zero();
  if (!lead)
    fail(ErrorKind::SeriesInvalid,
         "forcing has no known leading term at the origin");
  return ForcingLead{lead->coef, -lead->exponent};
}

RadialState series_start(const ProblemParams& params,
                         const DerivedConstants& constants, double alpha,
                         double r0) {
  (void)constants;
  if (!(alpha > 0.0)) fail(ErrorKind::InvalidParameters, "alpha must be > 0");
  if (!(r0 > 0.0)) fail(ErrorKind::InvalidParameters, "r0 must be > 0");
  const double n = params.n(), p = params.p();
  const auto klead = params.K().at_zero();
  if (!klead || !(klead->exponent > -2.0))
    fail(ErrorKind::SeriesInvalid, "K has no integrable leading term at 0");
  const double k0 = klead->coef, e = klead->exponent;
  const auto flead = forcing_lead(params);
  if (flead && flead->d >= 2.0)
    fail(ErrorKind::SeriesInvalid,
         "forcing decay d=" + str(flead->d) +
             " >= 2: u(0) is not finite, integrate inward from r=R instead");
  const double mu = params.mu();
  const double ap = power(alpha, p);

  for (int shrink = 0; shrink < 200; ++shrink, r0 *= 0.5) {
    const double t1 = k0 * ap * std::pow(r0, e + 2.0) / ((e + 2.0) * (n + e));
    const double dt1 = k0 * ap * std::pow(r0, e + 1.0) / (n + e);
    double t2 = 0.0, dt2 = 0.0;
    if (flead) {
      const double d = flead->d;
      t2 = mu * flead->b * std::pow(r0, 2.0 - d) / ((2.0 - d) * (n - d));
      dt2 = mu * flead->b * std::pow(r0, 1.0 - d) / (n - d);
    }
    // neglected terms: the u^p feedback and the next order of K and f
    double next = k0 * p * power(alpha, p - 1.0) * std::pow(r0, e + 2.0) *
                  (t1 + t2) / ((e + 2.0) * (n + e));
    next += std::abs(params.K().value(r0) * std::pow(r0, -e) / k0 - 1.0) * t1;
    if (flead && t2 != 0.0)
      next += std::abs(params.f().value(r0) * std::pow(r0, flead->d) /
                           flead->b -
                       1.0) *
              t2;
    if (next < 1e-12 * alpha) return {r0, alpha - t1 - t2, -dt1 - dt2};
  }
  fail(ErrorKind::SeriesInvalid, "series start did not reach accuracy");
}

Trajectory integrate_radial(const ProblemParams& params, RadialState start,
                            double r_target, const RadialOptions& options) {
  if (!(start.r > 0.0) || !(r_target > 0.0))
    fail(ErrorKind::InvalidParameters, "radii must be positive");
  const double n = params.n(), p = params.p(), mu = params.mu();
  const bool forced = !params.unforced();
  const CoefficientProfile& K = params.K();
  const CoefficientProfile& f = params.f();
  SecondOrderSystem sys;
  sys.accel = [&, n, p, mu, forced](double r, double u, double du) {
    double ddu = -(n - 1.0) / r * du - K.value(r) * clamped_power(u, p);
    if (forced) ddu -= mu * f.value(r);
    return ddu;
  };
  sys.derivative_weight = [](double r) { return r; };
  IntegrateOptions opt;
  opt.tol = options.tol;
  opt.positivity_event = options.positivity_event;
  opt.max_steps = options.max_steps;
  opt.h_max = options.h_max;
  opt.tol_pos = kTolPos;
  return integrate_second_order(Coordinates::radial, sys,
                                {start.r, start.u, start.du}, r_target, opt);
}

Trajectory regular_radial(const ProblemParams& params,
                          const DerivedConstants& constants, double alpha,
                          double r_target, const RadialOptions& options,
                          double r0) {
  const RadialState s = series_start(params, constants, alpha, r0);
  return integrate_radial(params, s, r_target, options);
}

IntegralResidual integral_residual(
    const ProblemParams& params,
    const std::function<RadialState(double)>& state,
    std::span<const double> nodes) {
  if (nodes.size() < 2)
    fail(ErrorKind::InsufficientCoverage, "need at least two nodes");
  const double n = params.n();
  // refine so that every piece spans a radius ratio of at most 1.1
  std::vector<double> x{nodes.front()};
  std::vector<std::size_t> anchor_index{0};
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const double a = nodes[i - 1], b = nodes[i];
    if (!(b > a)) fail(ErrorKind::InvalidParameters, "nodes must increase");
    const int k = std::max(1, static_cast<int>(std::ceil(std::log(b / a) / std::log(1.1))));
    for (int j = 1; j < k; ++j) x.push_back(a * std::pow(b / a, double(j) / k));
    x.push_back(b);
    anchor_index.push_back(x.size() - 1);
  }
  auto integrand = [&](double s) {
    const RadialState st = state(s);
    return source(params, s, st.u) * std::pow(s, n - 1.0);
  };
  const RadialState first = state(x.front());
  const double C0 = -std::pow(x.front(), n - 1.0) * first.du;

  // I at piece starts and outer contributions per piece
  const std::size_t pieces = x.size() - 1;
  std::vector<double> outer(pieces);
  double I = 0.0;
  for (std::size_t j = 0; j < pieces; ++j) {
    const double a = x[j], b = x[j + 1];
    const double Ia = I;
    outer[j] = quadrature::gauss5(
        [&](double t) {
          const double It = Ia + quadrature::gauss5(integrand, a, t);
          return std::pow(t, 1.0 - n) * (C0 + It);
        },
        a, b);
    I += quadrature::gauss5(integrand, a, b);
  }

  const double uR = state(x.back()).u;
  IntegralResidual out;
  double tail = 0.0;
  double umax = 0.0;
  std::size_t next_anchor = anchor_index.size();
  for (std::size_t j = pieces + 1; j-- > 0;) {
    if (j < pieces) tail += outer[j];
    if (next_anchor > 0 && anchor_index[next_anchor - 1] == j) {
      --next_anchor;
      const RadialState st = state(x[j]);
      umax = std::max(umax, std::abs(st.u));
      const double defect = std::abs(st.u - uR - tail);
      if (defect > out.max_abs) {
        out.max_abs = defect;
        out.at = x[j];
      }
    }
  }
  out.max_rel = umax > 0.0 ? out.max_abs / umax : out.max_abs;
  return out;
}

IntegralResidual integral_residual(const ProblemParams& params,
                                   const Trajectory& trajectory, double R) {
  if (trajectory.coordinates() != Coordinates::radial)
    fail(ErrorKind::InvalidParameters, "integral residual needs a radial trajectory");
  if (!trajectory.covers(R) || !(R > trajectory.lo()))
    fail(ErrorKind::InsufficientCoverage,
         "trajectory [" + str(trajectory.lo()) + ", " + str(trajectory.hi()) +
             "] does not cover (r_min, " + str(R) + "]");
  std::vector<double> nodes;
  for (const auto& s : trajectory.samples())
    if (s.x < R) nodes.push_back(s.x);
  std::sort(nodes.begin(), nodes.end());
  nodes.push_back(R);
  auto state = [&](double r) {
    const Sample s = trajectory.at(r);
    return RadialState{r, s.y, s.dy};
  };
  return integral_residual(params, state, nodes);
}

std::vector<double> radial_values(const Trajectory& trajectory,
                                  std::span<const double> grid) {
  std::vector<double> out;
  out.reserve(grid.size());
  for (double r : grid) out.push_back(trajectory.at(r).y);
  return out;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2)
    fail(ErrorKind::InvalidParameters, "log grid needs 0 < lo < hi and n >= 2");
  std::vector<double> g(n);
  const double step = std::log(hi / lo) / double(n - 1);
  for (std::size_t i = 0; i < n; ++i) g[i] = lo * std::exp(step * double(i));
  g.front() = lo;
  g.back() = hi;
  return g;
}

}  // namespace slowdecay
