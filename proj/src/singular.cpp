#include "slowdecay/singular.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <sstream>

#include "slowdecay/error.hpp"
#include "slowdecay/power.hpp"

namespace slowdecay {

namespace {

std::string str(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

struct Level {
  double alpha = 0.0;
  std::vector<double> u;
  std::optional<ExcludedAlpha> excluded;
};

Level run_level(const ProblemParams& params, const DerivedConstants& c,
                double alpha, std::span<const double> grid,
                const SweepOptions& options) {
  Level level{alpha, {}, std::nullopt};
  try {
    const double r0 = std::min(1e-6, 1e-2 * grid.front());
    if (options.engine == SweepEngine::emden_fowler) {
      EFOptions ef;
      ef.tol = options.tol;
      const Trajectory tr =
          regular_ef(params, c, alpha, std::log(r0), std::log(grid.back()), ef);
      if (!tr.reached_target()) {
        ExcludedAlpha ex{alpha, to_string(tr.termination().kind), std::nullopt};
        if (tr.termination().kind == Termination::Kind::positivity_lost)
          ex.lost_at = std::exp(tr.termination().at);
        level.excluded = ex;
        return level;
      }
      level.u = ef_radial_values(c, tr, grid);
    } else {
      RadialOptions ro;
      ro.tol = options.tol;
      const Trajectory tr = regular_radial(params, c, alpha, grid.back(), ro, r0);
      if (!tr.reached_target()) {
        ExcludedAlpha ex{alpha, to_string(tr.termination().kind), std::nullopt};
        if (tr.termination().kind == Termination::Kind::positivity_lost)
          ex.lost_at = tr.termination().at;
        level.excluded = ex;
        return level;
      }
      level.u = radial_values(tr, grid);
    }
  } catch (const Error& e) {
    level.excluded = ExcludedAlpha{alpha, e.what(), std::nullopt};
  }
  return level;
}

double rel_sup_gap(const std::vector<double>& hi, const std::vector<double>& lo) {
  double gap = 0.0;
  for (std::size_t j = 0; j < hi.size(); ++j)
    gap = std::max(gap, std::abs(hi[j] - lo[j]) / std::abs(hi[j]));
  return gap;
}

std::optional<double> singular_root(const ProblemParams& params,
                                    const DerivedConstants& c,
                                    LimitClass* cls = nullptr) {
  if (!c.k0) return std::nullopt;
  switch (c.regime) {
    case ForcingRegime::none:
      if (cls) *cls = LimitClass::z2;
      return unforced_root(*c.k0, params.p(), c.Lp1);
    case ForcingRegime::subcritical:
      if (cls) *cls = LimitClass::z_star;
      return unforced_root(*c.k0, params.p(), c.Lp1);
    case ForcingRegime::critical:
      if (cls) *cls = LimitClass::z2;
      return limit_equation_roots(*c.k0, params.p(), c.Lp1, c.b).z2;
    case ForcingRegime::supercritical: return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

std::string to_string(SweepEngine e) {
  return e == SweepEngine::emden_fowler ? "emden_fowler" : "radial";
}

std::vector<double> geometric_ladder(int max_exp) {
  if (max_exp < 0) fail(ErrorKind::InvalidParameters, "ladder exponent must be >= 0");
  std::vector<double> out;
  for (int k = 0; k <= max_exp; ++k) out.push_back(std::ldexp(1.0, k));
  return out;
}

SweepResult alpha_sweep(const ProblemParams& params, const DerivedConstants& c,
                        std::span<const double> ladder,
                        std::span<const double> grid,
                        const SweepOptions& options) {
  if (ladder.empty()) fail(ErrorKind::InvalidParameters, "empty alpha ladder");
  if (grid.empty() || !(grid.front() > 0.0))
    fail(ErrorKind::InvalidParameters, "grid must be nonempty and positive");
  for (std::size_t i = 1; i < ladder.size(); ++i)
    if (!(ladder[i] > ladder[i - 1]))
      fail(ErrorKind::InvalidParameters, "alpha ladder must be strictly ascending");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      fail(ErrorKind::InvalidParameters, "grid must be strictly increasing");
  if (auto lead = forcing_lead(params); lead && lead->d >= 2.0)
    fail(ErrorKind::SeriesInvalid, "sweep needs a regular IVP (d < 2)");

  std::vector<Level> levels(ladder.size());
  if (options.parallel && ladder.size() > 1) {
    std::vector<std::future<Level>> jobs;
    for (double alpha : ladder)
      jobs.push_back(std::async(std::launch::async, run_level, std::cref(params),
                                std::cref(c), alpha, grid, std::cref(options)));
    for (std::size_t i = 0; i < jobs.size(); ++i) levels[i] = jobs[i].get();
  } else {
    for (std::size_t i = 0; i < ladder.size(); ++i)
      levels[i] = run_level(params, c, ladder[i], grid, options);
  }

  SweepResult res;
  res.grid.assign(grid.begin(), grid.end());
  for (auto& lv : levels) {
    if (lv.excluded) {
      res.excluded.push_back(*lv.excluded);
      continue;
    }
    res.alphas.push_back(lv.alpha);
    res.values.push_back(std::move(lv.u));
  }
  if (res.alphas.empty()) return res;
  res.smallest_admissible_alpha = res.alphas.front();
  for (std::size_t i = 1; i < res.values.size(); ++i) {
    for (std::size_t j = 0; j < grid.size(); ++j)
      if (!(res.values[i][j] > res.values[i - 1][j])) ++res.monotonicity_violations;
    res.gaps.push_back(rel_sup_gap(res.values[i], res.values[i - 1]));
  }
  res.envelope = res.values.back();
  if (!res.gaps.empty()) {
    res.sup_gap = res.gaps.back();
    res.converged = res.sup_gap < options.convergence_tol;
  }
  if (options.extrapolate && res.values.size() >= 3) {
    const auto& u0 = res.values[res.values.size() - 3];
    const auto& u1 = res.values[res.values.size() - 2];
    const auto& u2 = res.values.back();
    std::vector<double> ex(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double d1 = u2[j] - u1[j], d0 = u1[j] - u0[j];
      const double den = d1 - d0;
      ex[j] = den != 0.0 && std::abs(den) > 1e-14 * std::abs(u2[j])
                  ? u2[j] - d1 * d1 / den
                  : u2[j];
    }
    res.extrapolated = std::move(ex);
  }
  LimitClass cls = LimitClass::unresolved;
  if (auto z = singular_root(params, c, &cls)) {
    const double v = std::pow(grid.front(), c.m) * res.envelope.front();
    if (std::abs(v - *z) <= 5e-2 * *z) res.envelope_class = cls;
  }
  return res;
}

BoundCheck verify_bound(const ProblemParams& params, const DerivedConstants& c,
                        std::span<const double> grid,
                        std::span<const double> values) {
  if (grid.size() != values.size())
    fail(ErrorKind::InvalidParameters, "grid and values differ in length");
  BoundCheck out;
  const double q = 1.0 / (params.p() - 1.0);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double r = grid[j];
    const double w = params.K().weighted(r, -params.l());
    const double ratio = std::pow(r, c.m) * values[j] * std::pow(w, q) / c.L;
    if (ratio > out.max_ratio || j == 0) {
      out.max_ratio = ratio;
      out.at = r;
    }
  }
  out.holds = out.max_ratio <= 1.0 + 1e-9;
  return out;
}

DirectConstruction construct_singular_direct(const ProblemParams& params,
                                             const DerivedConstants& c,
                                             const DirectOptions& options) {
  const auto z = singular_root(params, c);
  if (!z)
    fail(ErrorKind::ConstructionInapplicable,
         "no nonzero limit root for this forcing regime");
  const Linearization lin = linearize_ef(params, c, *z, options.t_start);
  std::string mode;
  double lambda;
  if (lin.re2 < 0.0) {
    mode = "sink";
    lambda = lin.re2;  // slowest decaying direction
  } else if (lin.real && lin.re1 < 0.0) {
    mode = "saddle";
    lambda = lin.re2;
  } else {
    fail(ErrorKind::ConstructionInapplicable,
         "the root repels in every direction (eigenvalue real parts " +
             str(lin.re1) + ", " + str(lin.re2) +
             "); forward seeding does not single out one solution");
  }
  const double q = 1.0 / (params.p() - 1.0);
  auto run = [&](int sign) {
    const double d = sign * options.perturbation * std::max(1.0, *z);
    EFState s{options.t_start, *z + d, d * lambda};
    Trajectory tr = integrate_ef(params, c, s, options.t_end, options.ef);
    double worst = 0.0;
    for (const auto& smp : tr.samples()) {
      const double k = k_of_t(params, smp.x);
      worst = std::max(worst, smp.y * std::pow(k, q) / c.L);
    }
    return std::pair<Trajectory, double>(std::move(tr), worst);
  };
  if (options.perturbation == 0.0) {
    auto [tr, worst] = run(0);
    return {std::move(tr), *z, 0, mode, lin, worst};
  }
  std::optional<DirectConstruction> fallback;
  for (int sign : {+1, -1}) {
    auto [tr, worst] = run(sign);
    const bool ok = tr.reached_target();
    if (ok && worst <= 1.0 + 1e-9)
      return {std::move(tr), *z, sign, mode, lin, worst};
    if (ok && !fallback) fallback = DirectConstruction{std::move(tr), *z, sign, mode, lin, worst};
  }
  if (fallback) return std::move(*fallback);
  fail(ErrorKind::ConstructionInapplicable,
       "neither perturbation branch stays positive up to t_end");
}

UniquenessReport uniqueness_crosscheck(const DerivedConstants& c,
                                       const SingularCandidate& first,
                                       const SingularCandidate& second,
                                       std::span<const double> grid,
                                       double threshold) {
  (void)c;  // v = r^m u cancels in the ratio
  auto singular = [](LimitClass k) {
    return k != LimitClass::zero && k != LimitClass::unresolved;
  };
  if (!singular(first.limit_class) || !singular(second.limit_class))
    fail(ErrorKind::ClassMismatch,
         "both inputs must be classified singular (got " +
             to_string(first.limit_class) + ", " +
             to_string(second.limit_class) + ")");
  if (first.values.size() != grid.size() || second.values.size() != grid.size())
    fail(ErrorKind::InvalidParameters, "values do not match the grid");
  UniquenessReport rep;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double u1 = first.values[j], u2 = second.values[j];
    rep.distance = std::max(rep.distance, std::abs(u1 - u2) / std::abs(u2));
    if (u2 > kTolPos) {
      rep.t.push_back(std::log(grid[j]));
      rep.h.push_back(u1 / u2);
      rep.h_max_dev = std::max(rep.h_max_dev, std::abs(u1 / u2 - 1.0));
    }
  }
  rep.consistent = rep.distance < threshold && rep.h_max_dev < threshold;
  return rep;
}

ClosedFormSingular closed_form_singular(const ProblemParams& params,
                                        const DerivedConstants& c) {
  const auto* k = std::get_if<family::PurePower>(&params.K().family());
  if (!k || std::abs(k->exponent - params.l()) > 1e-12)
    fail(ErrorKind::NotApplicable, "closed form needs K = k0 r^l");
  if (!params.unforced())
    fail(ErrorKind::NotApplicable, "closed form needs mu = 0 or f = 0");
  return {c.L * std::pow(k->coef, -1.0 / (params.p() - 1.0)), c.m};
}

double closed_form_residual(const ProblemParams& params,
                            const ClosedFormSingular& U, std::size_t count,
                            unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> logr(std::log(1e-3), std::log(1e3));
  double worst = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double r = std::exp(logr(rng));
    const double a = U.d2(r), b = (params.n() - 1.0) / r * U.d1(r),
                 k = params.K().value(r) * power(U.value(r), params.p());
    worst = std::max(worst, std::abs(a + b + k) /
                                (std::abs(a) + std::abs(b) + std::abs(k)));
  }
  return worst;
}

double scaling_deviation(const ProblemParams& params, const DerivedConstants& c,
                         double alpha, std::span<const double> grid,
                         const RadialOptions& options) {
  if (!params.unforced() || !params.K().is_pure_power())
    fail(ErrorKind::NotApplicable, "scaling needs pure-power K and no forcing");
  const double s = std::pow(alpha, 1.0 / c.m);
  const double r0 = std::min(1e-6, 1e-2 * grid.front());
  Trajectory ua = regular_radial(params, c, alpha, grid.back(), options, r0 / s);
  Trajectory u1 = regular_radial(params, c, 1.0, s * grid.back(), options, r0);
  ua.require_complete();
  u1.require_complete();
  double worst = 0.0;
  for (double r : grid) {
    const double a = ua.at(r).y;
    const double b = alpha * u1.at(s * r).y;
    worst = std::max(worst, std::abs(a - b) / std::abs(a));
  }
  return worst;
}

}  // namespace slowdecay
