// One PASS/FAIL line per acceptance criterion; exit status is the number of
// failures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "slowdecay/asymptotics.hpp"
#include "slowdecay/error.hpp"
#include "slowdecay/instability.hpp"
#include "slowdecay/singular.hpp"

using namespace slowdecay;

namespace {

const double kU = 2.0 * std::sqrt(3.0);  // r U(r) in the pure case

ProblemParams pure() {
  return ProblemParams(15, 3, 0, 0, CoefficientProfile::pure_power(1, 0),
                       CoefficientProfile::zero());
}

ProblemParams forced(double b) {
  return ProblemParams(15, 3, 0, 1, CoefficientProfile::pure_power(1, 0),
                       CoefficientProfile::pure_power(b, -3));
}

struct Shared {
  ProblemParams P = pure();
  DerivedConstants c = derive_constants(P);
  std::vector<double> grid = log_grid(0.1, 10.0, 50);
  std::optional<Trajectory> regular;    // EF, t in [-14, 0]
  std::optional<DirectConstruction> direct;
  std::optional<SweepResult> sweep;
};

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("%s criterion %2d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  if (!ok) ++failures;
}

void run(int id, const std::function<std::pair<bool, std::string>()>& body) {
  try {
    const auto [ok, detail] = body();
    report(id, ok, detail);
  } catch (const std::exception& e) {
    report(id, false, std::string("exception: ") + e.what());
  }
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string oracle_path = argc > 1 ? argv[1] : "tests/oracles/constants.json";
  Shared S;
  auto& [P, c, grid, regular, direct, sweep] = S;

  run(1, [&] {
    std::ifstream in(oracle_path);
    if (!in) return std::pair{false, "cannot open oracle " + oracle_path};
    const auto oracle = nlohmann::json::parse(in).at("15,0,3");
    double worst = 0.0;
    const auto cmp = [&](const char* key, double value) {
      worst = std::max(worst, std::abs(value - oracle.at(key).get<double>()));
    };
    cmp("m", c.m);
    cmp("L", c.L);
    cmp("a", c.a);
    cmp("lambda2", c.lambda2.value_or(NAN));
    cmp("p_c", c.p_c.finite.value_or(NAN));
    cmp("b_max", c.b_max.value_or(NAN));
    return std::pair{worst < 1e-9, fmt("max |constant - oracle| = %.3g (m=%g L=%.10g p_c=%.10g)",
                                       worst, c.m, c.L, *c.p_c.finite)};
  });

  run(2, [&] {
    const auto t0 = std::chrono::steady_clock::now();
    direct = construct_singular_direct(P, c);
    sweep = alpha_sweep(P, c, geometric_ladder(14), grid);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto dv = ef_radial_values(c, direct->trajectory, grid);
    double dd = 0.0, de = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double U = kU / grid[j];
      dd = std::max(dd, std::abs(dv[j] / U - 1.0));
      de = std::max(de, std::abs(sweep->envelope[j] / U - 1.0));
    }
    return std::pair{dd < 1e-4 && de < 1e-2 && secs <= 30.0,
                     fmt("direct %.3g (<1e-4), envelope %.3g (<1e-2), %.2f s", dd, de, secs)};
  });

  run(3, [&] {
    if (!sweep) throw Error(ErrorKind::NotApplicable, "no sweep");
    std::size_t violations = 0;
    for (std::size_t i = 1; i < sweep->values.size(); ++i)
      for (std::size_t j = 0; j < grid.size(); ++j)
        if (!(sweep->values[i][j] > sweep->values[i - 1][j])) ++violations;
    double ratio = 0.0, saturation = 0.0;
    for (const auto& v : sweep->values)
      for (std::size_t j = 0; j < grid.size(); ++j)
        ratio = std::max(ratio, grid[j] * v[j] / c.L);
    for (std::size_t j = 0; j < grid.size(); ++j)
      saturation = std::max(saturation, std::abs(grid[j] * sweep->envelope[j] / c.L - 1.0));
    const bool ok = sweep->values.size() == 15 && violations == 0 && ratio < 1.0 &&
                    saturation < 1e-2;
    return std::pair{ok, fmt("%g levels, %g ordering violations, max r^m u/L = %.17g, "
                             "envelope saturation %.3g",
                             double(sweep->values.size()), double(violations), ratio,
                             saturation)};
  });

  std::vector<std::pair<std::string, Trajectory>> classified;
  run(4, [&] {
    regular = regular_ef(P, c, 1.0, -14.0, 0.0);
    const auto rc = classify_origin_limit(P, c, *regular);
    classified.emplace_back("regular", *regular);
    const auto dc = classify_origin_limit(P, c, direct->trajectory);
    classified.emplace_back("direct", direct->trajectory);
    const ProblemParams F = forced(11);
    const DerivedConstants cf = derive_constants(F);
    const Trajectory e1 = integrate_ef(F, cf, {-20, 1.0, 0}, 0.0);
    const Trajectory e2 = integrate_ef(F, cf, {-20, cf.roots->z2, 0}, 0.0);
    const auto c1 = classify_origin_limit(F, cf, e1);
    const auto c2 = classify_origin_limit(F, cf, e2);
    classified.emplace_back("forced z1", e1);
    classified.emplace_back("forced z2", e2);
    bool rejected = false;
    try {
      const ProblemParams G = forced(17);
      const DerivedConstants cg = derive_constants(G);
      classify_origin_limit(G, cg, integrate_ef(G, cg, {-20, 1.0, 0}, -5.0));
    } catch (const Error& e) {
      rejected = e.kind() == ErrorKind::NoNonnegativeRoot;
    }
    const bool ok = rc.limit_class == LimitClass::zero &&
                    dc.limit_class == LimitClass::z2 && std::abs(dc.estimate - 3.4641) < 1e-3 &&
                    c1.limit_class == LimitClass::z1 && std::abs(c1.estimate - 1.0) < 1e-3 &&
                    c2.limit_class == LimitClass::z2 && std::abs(c2.estimate - 2.8541) < 1e-3 &&
                    rejected;
    return std::pair{ok, "regular " + to_string(rc.limit_class) + ", direct " +
                             to_string(dc.limit_class) + fmt(" %.7f", dc.estimate) +
                             ", forced " + to_string(c1.limit_class) + fmt(" %.7f", c1.estimate) +
                             " / " + to_string(c2.limit_class) + fmt(" %.7f", c2.estimate) +
                             (rejected ? ", b=17 rejected" : ", b=17 NOT rejected")};
  });

  run(5, [&] {
    double res = 0.0, drop = 0.0;
    std::size_t violations = 0;
    for (const Trajectory* tr : {&*regular, &direct->trajectory}) {
      const EnergyTrace e = energy_trace(P, c, *tr, 0.0, 1e-8);
      violations += e.monotonicity_violations;
      res = std::max(res, energy_identity_residual(P, c, *tr, 0.0));
      for (std::size_t i = 0; i < e.t.size(); ++i)
        drop = std::max(drop, std::abs(e.E[i] - e.E.back() - e.dissipation[i]));
    }
    return std::pair{violations == 0 && res < 1e-7 && drop < 1e-7,
                     fmt("%g violations, identity residual %.3g, |E-drop - a int v'^2| %.3g",
                         double(violations), res, drop)};
  });

  run(6, [&] {
    double worst = 0.0;
    for (const auto& [name, tr] : classified) worst = std::max(worst, std::abs(tr.at(-12.0).dy));
    return std::pair{classified.size() == 4 && worst < 1e-3,
                     fmt("max |v'(-12)| = %.3g over %g trajectories", worst,
                         double(classified.size()))};
  });

  run(7, [&] {
    const auto K = CoefficientProfile::pure_power(1, 0);
    const ManufacturedForcing mp = manufactured_forcing(15, 3, K, ReferenceSolution::power(1, 0.5));
    const ProblemParams M(15, 3, 0, 1, K, mp.f);
    const DerivedConstants cm = derive_constants(M);
    const double r0 = 1e-6;
    const Trajectory tm =
        integrate_radial(M, {r0, 1 / std::sqrt(r0), -0.5 / (r0 * std::sqrt(r0))}, 1.0);
    tm.require_complete();
    double dev = 0.0;
    for (const auto& s : tm.samples()) dev = std::max(dev, std::abs(s.y * std::sqrt(s.x) - 1.0));
    const RateFit fp = fit_rate(cm, tm, 2.5);

    const ProblemParams Bd(15, 3, 0, 1, K, CoefficientProfile::pure_power(1, -1));
    const DerivedConstants cb = derive_constants(Bd);
    const RateFit fb = fit_rate(cb, regular_radial(Bd, cb, 1.0, 1.0), 1.0);

    const ManufacturedForcing ml =
        manufactured_forcing(15, 3, K, ReferenceSolution::logarithmic(1, 1));
    const ProblemParams Lg(15, 3, 0, 1, K, ml.f);
    const DerivedConstants cl = derive_constants(Lg);
    const double rl = 1e-7;
    const Trajectory tl = integrate_radial(Lg, {rl, std::log(1 / rl), -1 / rl}, 0.5);
    const RateFit fl = fit_rate(cl, tl, 2.0);
    const bool ok = dev <= 1e-6 && fp.rate_class == RateClass::power &&
                    std::abs(fp.exponent + 0.5) <= 0.025 &&
                    fb.rate_class == RateClass::bounded && fb.exponent < 1e-2 &&
                    fl.rate_class == RateClass::logarithmic && fl.residual < 1e-2;
    return std::pair{ok, fmt("round trip %.3g, slope %.6f, bounded variation %.3g, log residual %.3g",
                             dev, fp.exponent, fb.exponent, fl.residual)};
  });

  run(8, [&] {
    const Trajectory rr = regular_radial(P, c, 1.0, 5.0);
    const BoundEstimate br = apriori_bound_check(c, rr, 5.0);
    const BoundEstimate bs = apriori_bound_check(c, direct->trajectory, 10.0);
    return std::pair{br.stabilized && bs.stabilized && std::abs(bs.C_est - 3.4641) < 1e-3,
                     fmt("regular C_est %.6g (stabilized %g), singular C_est %.10g (stabilized %g)",
                         br.C_est, double(br.stabilized), bs.C_est, double(bs.stabilized))};
  });

  run(9, [&] {
    const auto dv = ef_radial_values(c, direct->trajectory, grid);
    const UniquenessReport u = uniqueness_crosscheck(
        c, {sweep->envelope, sweep->envelope_class},
        {dv, classify_origin_limit(P, c, direct->trajectory).limit_class}, grid);
    return std::pair{u.distance < 1e-2 && u.h_max_dev < 1e-2,
                     fmt("sup relative distance %.3g, max |h-1| %.3g", u.distance, u.h_max_dev)};
  });

  run(10, [&] {
    const LinearRun lr = integrate_linear({11, 0, 1}, {1, 0, 1}, 1.0, 0.0);
    const auto& t6 = lr.report.crossings.at(1).time;
    const double root = (11 + std::sqrt(117.0)) / 2;
    return std::pair{t6 && *t6 < 2.0 && std::abs(lr.report.slope - 10.908) <= 0.01 &&
                         std::abs(lr.report.slope - root) <= 0.01,
                     fmt("|y|=1e6 at t=%.4f, growth rate %.6f (root %.6f)", t6.value_or(NAN),
                         lr.report.slope, root)};
  });

  run(11, [&] {
    double worst = 0.0;
    for (double alpha : {2.0, 4.0, 8.0})
      worst = std::max(worst, scaling_deviation(P, c, alpha, grid));
    return std::pair{worst < 1e-6, fmt("max relative deviation %.3g", worst)};
  });

  run(12, [&] {
    const double tol = Tolerance{}.rel;
    double worst = 0.0;
    for (double alpha : {1.0, 64.0, 16384.0})
      worst = std::max(worst, integral_residual(P, regular_radial(P, c, alpha, 10.0), 10.0).max_rel);
    double tc = 0.0;
    for (double alpha : {0.5, 1.0, 3.0}) {
      const Trajectory radial = regular_radial(P, c, alpha, 10.0);
      const Sample s = radial.at(0.01);
      const Trajectory ef = integrate_ef(P, c, to_ef(c, {0.01, s.y, s.dy}), std::log(10.0));
      for (double r : grid) {
        const double a = radial.at(r).y, b = ef.at(std::log(r)).y / std::pow(r, c.m);
        tc = std::max(tc, std::abs(a - b) / a);
      }
    }
    return std::pair{worst < 100 * tol && tc < 1e-7,
                     fmt("integral residual %.3g (< %.0e), transform consistency %.3g", worst,
                         100 * tol, tc)};
  });

  std::printf("%d of 12 criteria failed\n", failures);
  return failures;
}
