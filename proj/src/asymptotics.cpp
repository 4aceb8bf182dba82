#include "slowdecay/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "slowdecay/error.hpp"

namespace slowdecay {

namespace {

std::string str(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

/// (r, u) at the trajectory's sample points and the independent variable
/// mapping to radius.
double radius_of(const Trajectory& tr, double x) {
  return tr.coordinates() == Coordinates::emden_fowler ? std::exp(x) : x;
}

double to_x(const Trajectory& tr, double r) {
  return tr.coordinates() == Coordinates::emden_fowler ? std::log(r) : r;
}

double u_at(const DerivedConstants& c, const Trajectory& tr, double r) {
  const double y = tr.at(to_x(tr, r)).y;
  return tr.coordinates() == Coordinates::emden_fowler ? y * std::pow(r, -c.m)
                                                       : y;
}

struct Line {
  double slope, intercept, rms;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  Line l{sxy / sxx, 0.0, 0.0};
  l.intercept = my - l.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (l.intercept + l.slope * x[i]);
    ss += e * e;
  }
  l.rms = std::sqrt(ss / n);
  return l;
}

}  // namespace

BoundEstimate apriori_bound_check(const DerivedConstants& c,
                                  const Trajectory& trajectory, double R) {
  const bool ef = trajectory.coordinates() == Coordinates::emden_fowler;
  const double r_lo = radius_of(trajectory, trajectory.lo());
  const double r_hi = radius_of(trajectory, trajectory.hi());
  if (!(r_lo <= 1e-3 * R) || R > r_hi * (1.0 + 1e-12))
    fail(ErrorKind::InsufficientCoverage,
         "bound check needs coverage of [" + str(1e-3 * R) + ", " + str(R) +
             "], have [" + str(r_lo) + ", " + str(r_hi) + "]");
  // weighted values at samples and at R, ordered from R downward
  std::vector<std::pair<double, double>> pts;
  for (const auto& s : trajectory.samples()) {
    const double r = radius_of(trajectory, s.x);
    if (r > R) continue;
    pts.emplace_back(r, ef ? s.y : s.y * std::pow(r, c.m));
  }
  pts.emplace_back(R, u_at(c, trajectory, R) * std::pow(R, c.m));
  std::sort(pts.begin(), pts.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  BoundEstimate out;
  out.r_lo = r_lo;
  out.R = R;
  out.C_est = -kInfinity;
  double at_decade = -kInfinity;
  const double decade_edge = 10.0 * r_lo;
  for (const auto& [r, w] : pts) {
    if (w > out.C_est) {
      out.C_est = w;
      out.at = r;
    }
    if (r >= decade_edge) at_decade = out.C_est;
  }
  out.decade_increase =
      at_decade > 0.0 ? out.C_est / at_decade - 1.0 : kInfinity;
  out.stabilized = out.decade_increase < 0.01;
  return out;
}

std::string to_string(RateClass c) {
  switch (c) {
    case RateClass::power: return "power";
    case RateClass::logarithmic: return "logarithmic";
    case RateClass::bounded: return "bounded";
  }
  return "?";
}

RateFit fit_rate(const DerivedConstants& c, const Trajectory& trajectory,
                 double d, const FitWindow& window) {
  if (d >= c.m + 2.0 - 1e-12)
    fail(ErrorKind::NotApplicable,
         "rate classification needs d < m+2 (d=" + str(d) + ")");
  if (!(window.lo > 0.0) || !(window.hi > window.lo) || window.points < 3)
    fail(ErrorKind::InvalidParameters, "bad fit window");
  if (window.hi / window.lo < 1e3 * (1.0 - 1e-12))
    fail(ErrorKind::WindowTooShort, "fit window spans fewer than 3 decades");
  const double r_lo = radius_of(trajectory, trajectory.lo());
  const double r_hi = radius_of(trajectory, trajectory.hi());
  if (r_lo > window.lo * (1.0 + 1e-12) || r_hi < window.hi * (1.0 - 1e-12))
    fail(ErrorKind::WindowTooShort,
         "trajectory [" + str(r_lo) + ", " + str(r_hi) +
             "] does not cover the fit window [" + str(window.lo) + ", " +
             str(window.hi) + "]");
  std::vector<double> r(window.points), u(window.points);
  for (std::size_t i = 0; i < window.points; ++i) {
    r[i] = window.lo * std::pow(window.hi / window.lo,
                                double(i) / double(window.points - 1));
    r[i] = std::clamp(r[i], r_lo, r_hi);
    u[i] = u_at(c, trajectory, r[i]);
  }
  RateFit fit;
  fit.window = window;
  const bool is_log = std::abs(d - 2.0) <= 1e-9;
  if (d > 2.0 && !is_log) {
    fit.rate_class = RateClass::power;
    std::vector<double> x(r.size()), y(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (!(u[i] > 0.0)) fail(ErrorKind::PositivityLost, "u <= 0 in fit window");
      x[i] = std::log(r[i]);
      y[i] = std::log(u[i]);
    }
    const Line l = least_squares(x, y);
    fit.exponent = l.slope;
    fit.intercept = l.intercept;
    fit.residual = l.rms;
    fit.expected = -(d - 2.0);
  } else if (is_log) {
    fit.rate_class = RateClass::logarithmic;
    std::vector<double> x(r.size());
    double mean = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      x[i] = std::abs(std::log(r[i]));
      mean += std::abs(u[i]);
    }
    mean /= double(r.size());
    const Line l = least_squares(x, u);
    fit.exponent = l.slope;
    fit.intercept = l.intercept;
    fit.residual = l.rms / mean;
  } else {
    fit.rate_class = RateClass::bounded;
    // decade nearest the origin
    double lo = kInfinity, hi = -kInfinity, mean = 0.0;
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (r[i] > 10.0 * window.lo * (1.0 + 1e-12)) continue;
      lo = std::min(lo, u[i]);
      hi = std::max(hi, u[i]);
      mean += u[i];
      ++cnt;
    }
    mean /= double(cnt);
    fit.exponent = (hi - lo) / std::abs(mean);
    fit.intercept = mean;
    fit.residual = fit.exponent;
  }
  return fit;
}

ManufacturedForcing manufactured_forcing(double n, double p,
                                         const CoefficientProfile& K,
                                         const ReferenceSolution& u_star) {
  ManufacturedForcing out;
  const CoefficientProfile f = CoefficientProfile::manufactured(u_star, n, p, K);
  const Interval dom = f.domain();
  const double top = std::min(dom.hi, 1e6);

  // exact homogeneous solution: f vanishes relative to its terms
  auto relative = [&](double r) {
    const double us = u_star.value(r);
    const double scale = std::abs(u_star.d2(r)) +
                         std::abs((n - 1.0) / r * u_star.d1(r)) +
                         std::abs(K.value(r) * std::pow(us, p));
    return f.value(r) / scale;
  };
  bool all_zero = true;
  for (int i = 0; i <= 60; ++i) {
    const double r = 1e-6 * std::pow(top * (1.0 - 1e-9) / 1e-6, i / 60.0);
    if (std::abs(relative(r)) > 1e-12) {
      all_zero = false;
      break;
    }
  }
  if (all_zero) {
    out.zero_forcing = true;
    out.positive_up_to = 0.0;
    return out;
  }

  const auto lead = f.at_zero();
  const double r_small = std::max(1e-12, dom.lo * 2.0);
  const bool positive_near_zero =
      lead ? lead->coef > 0.0 : f.value(r_small) > 0.0;
  if (!positive_near_zero)
    fail(ErrorKind::NonpositiveForcing,
         "manufactured forcing is nonpositive near the origin");

  // scan outward for the first sign change, then bisect on it
  const int N = 2000;
  double prev = r_small;
  double edge = top;
  for (int i = 1; i <= N; ++i) {
    const double r = r_small * std::pow(top * (1.0 - 1e-12) / r_small, double(i) / N);
    if (!(f.value(r) > 0.0)) {
      double a = prev, b = r;
      for (int it = 0; it < 200 && b - a > 1e-15 * b; ++it) {
        const double mid = 0.5 * (a + b);
        (f.value(mid) > 0.0 ? a : b) = mid;
      }
      edge = a;
      break;
    }
    prev = r;
  }
  out.f = f;
  out.positive_up_to = edge;
  if (lead) {
    out.b = lead->coef;
    out.d = -lead->exponent;
  }
  return out;
}

}  // namespace slowdecay
