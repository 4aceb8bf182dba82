#include "slowdecay/instability.hpp"

#include <cmath>
#include <limits>

#include "slowdecay/error.hpp"

namespace slowdecay {

std::string to_string(GrowthVerdict v) {
  return v == GrowthVerdict::unbounded_detected ? "unbounded_detected"
                                                : "bounded_within_horizon";
}

LinearRun integrate_linear(const ConvergingCoefficient& f,
                           const ConvergingCoefficient& g, double y0,
                           double dy0, const LinearOptions& options) {
  if (!(options.horizon >= 1.0))
    fail(ErrorKind::InvalidParameters, "horizon must be at least one unit");
  LinearRun run;
  GrowthReport& rep = run.report;
  rep.crossings = {{1e3, std::nullopt}, {1e6, std::nullopt}};
  const double b = f.limit, c = g.limit;
  const double disc = b * b - 4.0 * c;
  rep.complex_roots = disc < 0.0;
  rep.predicted = rep.complex_roots ? 0.5 * b : 0.5 * (b + std::sqrt(disc));

  if (y0 == 0.0 && dy0 == 0.0) {
    rep.diagnostic = "zero initial data: y = 0 for all t";
    rep.log_abs_final = -std::numeric_limits<double>::infinity();
    return run;
  }

  SecondOrderSystem sys{
      [&f, &g](double t, double y, double dy) { return f(t) * dy - g(t) * y; },
      {}};
  IntegrateOptions opt;
  opt.tol = options.tol;
  const double t_end = options.t0 + options.horizon;
  const double sigma = 0.5 * b;
  const double omega = rep.complex_roots ? 0.5 * std::sqrt(-disc) : 0.0;
  // log of |y| (real roots) or of the oscillation amplitude
  auto log_size = [&](const Sample& s, double log_scale) {
    if (!rep.complex_roots) return log_scale + std::log(std::abs(s.y));
    const double q = (s.dy - sigma * s.y) / omega;
    return log_scale + 0.5 * std::log(s.y * s.y + q * q);
  };

  Sample state{options.t0, y0, dy0};
  double log_scale = 0.0;
  while (state.x < t_end) {
    Trajectory tr = integrate_second_order(Coordinates::linear, sys, state,
                                           t_end, opt);
    // cut the piece where the state gets large, then rescale
    double cut = t_end;
    for (const auto& s : tr.samples())
      if (std::max(std::abs(s.y), std::abs(s.dy)) > options.renormalize_above) {
        cut = s.x;
        break;
      }
    if (!tr.reached_target() && cut == t_end) tr.require_complete();
    // threshold crossings inside this piece, located on the dense output
    for (auto& cr : rep.crossings) {
      if (cr.time) continue;
      const double level = std::log(cr.threshold) - log_scale;
      const auto& smp = tr.samples();
      for (std::size_t i = 1; i < smp.size() && smp[i - 1].x < cut; ++i) {
        if (std::log(std::abs(smp[i].y)) <= level) continue;
        double lo = smp[i - 1].x, hi = smp[i].x;
        if (std::log(std::abs(smp[i - 1].y)) > level) hi = lo;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
          const double mid = 0.5 * (lo + hi);
          (std::log(std::abs(tr.at(mid).y)) > level ? hi : lo) = mid;
        }
        cr.time = hi;
        break;
      }
    }
    const Sample end = tr.at(cut);
    run.pieces.push_back(std::move(tr));
    run.log_scale.push_back(log_scale);
    if (cut >= t_end) break;
    const double s = std::max(std::abs(end.y), std::abs(end.dy));
    log_scale += std::log(s);
    state = {cut, end.y / s, end.dy / s};
  }

  auto log_size_at = [&](double t) {
    for (std::size_t i = run.pieces.size(); i-- > 0;)
      if (run.pieces[i].covers(t))
        return log_size(run.pieces[i].at(t), run.log_scale[i]);
    fail(ErrorKind::InsufficientCoverage, "time outside the integrated range");
  };
  rep.log_abs_final = log_size_at(t_end);
  rep.slope = rep.log_abs_final - log_size_at(t_end - 1.0);
  const bool crossed = rep.crossings.back().time.has_value();
  rep.verdict = crossed ? GrowthVerdict::unbounded_detected
                        : GrowthVerdict::bounded_within_horizon;
  return run;
}

}  // namespace slowdecay
