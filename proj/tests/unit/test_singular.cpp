#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "slowdecay/error.hpp"
#include "slowdecay/singular.hpp"

using namespace slowdecay;

namespace {

double max_rel_dev(const std::vector<double>& grid, const std::vector<double>& u,
                   double coef, double m) {
  double worst = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j)
    worst = std::max(worst, std::abs(u[j] * std::pow(grid[j], m) / coef - 1.0));
  return worst;
}

}  // namespace

TEST_CASE("pure-case sweep: ordering, bound, envelope") {
  const auto pp = fx::pure();
  const auto c = derive_constants(pp);
  const auto grid = log_grid(0.1, 10, 50);
  const auto ladder = geometric_ladder(14);
  const auto res = alpha_sweep(pp, c, ladder, grid);
  CHECK(res.alphas.size() == 15);
  CHECK(res.excluded.empty());
  CHECK(res.monotonicity_violations == 0);
  CHECK(res.converged);
  CHECK(max_rel_dev(grid, res.envelope, fx::kSqrt12, 1.0) < 1e-2);
  CHECK(res.envelope_class == LimitClass::z2);
  for (const auto& u : res.values) {
    const auto b = verify_bound(pp, c, grid, u);
    CHECK(b.holds);
    CHECK(b.max_ratio < 1.0);
  }
  const auto be = verify_bound(pp, c, grid, res.envelope);
  CHECK(be.max_ratio >= 0.99);
  CHECK(be.max_ratio <= 1.0 + 1e-9);
  // gaps shrink monotonically toward the limit
  for (std::size_t i = 1; i < res.gaps.size(); ++i)
    CHECK(res.gaps[i] < res.gaps[i - 1]);
}

TEST_CASE("single-level sweep is not converged") {
  const auto pp = fx::pure();
  const auto c = derive_constants(pp);
  const auto grid = log_grid(0.1, 10, 50);
  const std::vector<double> one{3.0};
  const auto res = alpha_sweep(pp, c, one, grid);
  CHECK(res.alphas.size() == 1);
  CHECK_FALSE(res.converged);
  CHECK(res.envelope == res.values.front());
}

TEST_CASE("sweep input validation") {
  const auto pp = fx::pure();
  const auto c = derive_constants(pp);
  const auto grid = log_grid(0.1, 10, 5);
  const std::vector<double> empty;
  CHECK_THROWS_AS(alpha_sweep(pp, c, empty, grid), Error);
  const std::vector<double> bad{2.0, 1.0};
  CHECK_THROWS_AS(alpha_sweep(pp, c, bad, grid), Error);
}

TEST_CASE("radial engine agrees with the EF engine") {
  const auto pp = fx::pure();
  const auto c = derive_constants(pp);
  const auto grid = log_grid(0.1, 10, 20);
  const auto ladder = geometric_ladder(4);
  SweepOptions ro;
  ro.engine = SweepEngine::radial;
  const auto a = alpha_sweep(pp, c, ladder, grid);
  const auto b = alpha_sweep(pp, c, ladder, grid, ro);
  for (std::size_t i = 0; i < a.values.size(); ++i)
    for (std::size_t j = 0; j < grid.size(); ++j)
      CHECK(a.values[i][j] == doctest::Approx(b.values[i][j]).epsilon(1e-7));
}

TEST_CASE("extrapolation option") {
  const auto pp = fx::pure();
  const auto c = derive_constants(pp);
  const auto grid = log_grid(0.1, 10, 20);
  SweepOptions opt;
  opt.extrapolate = true;
  const auto res = alpha_sweep(pp, c, geometric_ladder(10), grid, opt);
  REQUIRE(res.extrapolated);
  CHECK(max_rel_dev(grid, *res.extrapolated, fx::kSqrt12, 1.0) <
        max_rel_dev(grid, res.envelope, fx::kSqrt12, 1.0));
}

TEST_CASE("bound violation is detected") {
  const auto pp = fx::pure();
  const auto c = derive_constants(pp);
  const auto grid = log_grid(0.1, 10, 50);
  std::vector<double> u;
  for (double r : grid) u.push_back(1.1 * fx::kSqrt12 / r);
  const auto b = verify_bound(pp, c, grid, u);
  CHECK_FALSE(b.holds);
  CHECK(b.max_ratio == doctest::Approx(1.1));
}

TEST_CASE("direct construction, pure case") {
  const auto pp = fx::pure();
  const auto c = derive_constants(pp);
  const auto d = construct_singular_direct(pp, c);
  CHECK(d.mode == "sink");
  CHECK(d.sign == -1);  // the upward branch breaks the bound
  CHECK(std::abs(d.trajectory.samples().front().y - fx::kSqrt12) < 1e-6);
  const auto grid = log_grid(0.1, 10, 50);
  CHECK(max_rel_dev(grid, ef_radial_values(c, d.trajectory, grid), fx::kSqrt12, 1.0) < 1e-4);

  DirectOptions zero;
  zero.perturbation = 0.0;
  const auto z = construct_singular_direct(pp, c, zero);
  for (const auto& s : z.trajectory.samples()) CHECK(s.y == fx::kSqrt12);
}

TEST_CASE("direct construction, forced case respects the bound") {
  const auto pf = fx::forced(11.0);
  const auto cf = derive_constants(pf);
  const auto d = construct_singular_direct(pf, cf);
  CHECK(d.seed_root == doctest::Approx(2.8541019662496847));
  CHECK(d.trajectory.reached_target());
  for (const auto& s : d.trajectory.samples()) CHECK(s.y > 0.0);
  const auto grid = log_grid(0.1, 10, 50);
  CHECK(verify_bound(pf, cf, grid, ef_radial_values(cf, d.trajectory, grid)).holds);
}

TEST_CASE("direct construction inapplicable when the root repels") {
  // n=5, p=3: a = 1 > 0 but complex pair; use a < 0: n=5, p=1.8 (m=2.5, a=-2)
  const auto pp = fx::pure(5, 0, 1.8);
  const auto c = derive_constants(pp);
  REQUIRE(c.a < 0.0);
  try {
    construct_singular_direct(pp, c);
    FAIL("expected ConstructionInapplicable");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ConstructionInapplicable);
  }
}

TEST_CASE("uniqueness cross-check") {
  const auto pp = fx::pure();
  const auto c = derive_constants(pp);
  const auto grid = log_grid(0.1, 10, 50);
  const auto d = construct_singular_direct(pp, c);
  const SingularCandidate direct{ef_radial_values(c, d.trajectory, grid), LimitClass::z2};
  const auto self = uniqueness_crosscheck(c, direct, direct, grid);
  CHECK(self.distance == 0.0);
  CHECK(self.h_max_dev == 0.0);
  CHECK(self.consistent);

  const auto sw = alpha_sweep(pp, c, geometric_ladder(14), grid);
  const SingularCandidate env{sw.envelope, sw.envelope_class};
  const auto both = uniqueness_crosscheck(c, env, direct, grid);
  CHECK(both.consistent);
  CHECK(both.distance < 1e-2);

  SingularCandidate scaled = env;
  for (auto& u : scaled.values) u *= 1.05;
  const auto off = uniqueness_crosscheck(c, scaled, env, grid);
  CHECK_FALSE(off.consistent);
  CHECK(off.h_max_dev == doctest::Approx(0.05));

  SingularCandidate regular{sw.values.front(), LimitClass::zero};
  CHECK_THROWS_AS(uniqueness_crosscheck(c, regular, env, grid), Error);
}

TEST_CASE("closed-form singular solution") {
  const auto pp = fx::pure();
  const auto c = derive_constants(pp);
  const auto U = closed_form_singular(pp, c);
  CHECK(U.coef == doctest::Approx(2.0 * std::sqrt(3.0)));
  CHECK(U.exponent == 1.0);
  CHECK(closed_form_residual(pp, U) < 1e-12);

  const auto p4 = fx::pure(15, 0, 3, 4.0);
  CHECK(closed_form_singular(p4, derive_constants(p4)).coef ==
        doctest::Approx(std::sqrt(3.0)));

  const auto pf = fx::forced(11.0);
  CHECK_THROWS_AS(closed_form_singular(pf, derive_constants(pf)), Error);
}

TEST_CASE("scaling equivariance") {
  const auto pp = fx::pure();
  const auto c = derive_constants(pp);
  const auto grid = log_grid(0.1, 10, 50);
  for (double alpha : {2.0, 4.0, 8.0})
    CHECK(scaling_deviation(pp, c, alpha, grid) < 1e-6);
}
