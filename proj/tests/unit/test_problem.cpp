#include <doctest.h>

#include <cmath>

#include "slowdecay/error.hpp"
#include "slowdecay/problem.hpp"
#include "slowdecay/quadrature.hpp"

using namespace slowdecay;

namespace {

ProblemParams pure(double n, double l, double p, double k0 = 1.0) {
  return ProblemParams(n, p, l, 0.0, CoefficientProfile::pure_power(k0, l),
                       CoefficientProfile::zero());
}

}  // namespace

TEST_CASE("constants for n=15, l=0, p=3") {
  const auto c = derive_constants(pure(15, 0, 3));
  CHECK(c.m == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(c.Lp1 == doctest::Approx(12.0).epsilon(1e-15));
  CHECK(c.L == doctest::Approx(3.4641016151377544).epsilon(1e-14));
  CHECK(c.a == doctest::Approx(11.0));
  REQUIRE(c.lambda2);
  CHECK(*c.lambda2 == doctest::Approx(8.0).epsilon(1e-15));
  REQUIRE(c.p_c.finite);
  CHECK(*c.p_c.finite == doctest::Approx(2.137434755295254).epsilon(1e-14));
  REQUIRE(c.b_max);
  CHECK(*c.b_max == doctest::Approx(16.0).epsilon(1e-14));
  REQUIRE(c.roots);
  CHECK(c.roots->z1 == 0.0);
  CHECK(c.roots->z2 == doctest::Approx(std::sqrt(12.0)).epsilon(1e-14));
}

TEST_CASE("constants for n=5 have no lambda2 and infinite p_c") {
  const auto c = derive_constants(pure(5, 0, 3));
  CHECK(c.L == doctest::Approx(std::sqrt(2.0)));
  CHECK(c.a == doctest::Approx(1.0));
  CHECK_FALSE(c.lambda2);
  CHECK(c.p_c.is_infinite());
  CHECK_FALSE(c.p_c.exceeded_by(100.0));
}

TEST_CASE("n=3, p=3 is degenerate") {
  try {
    derive_constants(pure(3, 0, 3));
    FAIL("expected DegenerateExponents");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateExponents);
  }
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(pure(2.5, 0, 3), Error);
  CHECK_THROWS_AS(pure(15, 0, 1), Error);
  CHECK_THROWS_AS(pure(15, -2, 3), Error);
  CHECK_THROWS_AS(ProblemParams(15, 3, 0, -1, CoefficientProfile::pure_power(1, 0),
                                CoefficientProfile::zero()),
                  Error);
}

TEST_CASE("critical exponent") {
  CHECK(*critical_exponent(11, 0).finite ==
        doctest::Approx(6.922024586816337).epsilon(1e-13));
  CHECK(*critical_exponent(15, 0).finite ==
        doctest::Approx(2.137434755295254).epsilon(1e-13));
  CHECK(critical_exponent(10, 0).is_infinite());
  CHECK(*critical_exponent(10.001, 0).finite > 1e3);
  CHECK(critical_exponent(15, 0).exceeded_by(3.0));
}

TEST_CASE("forcing ceiling") {
  CHECK(forcing_ceiling(1, 3, 12) == doctest::Approx(16.0));
  CHECK(forcing_ceiling(1, 2, 1) == doctest::Approx(0.25));
  CHECK(forcing_ceiling(1e6, 3, 12) == doctest::Approx(0.016).epsilon(1e-12));
  // brute-force maximisation
  double best = 0.0;
  for (int i = 0; i <= 400000; ++i) {
    const double z = 4.0 * i / 400000.0;
    best = std::max(best, 12.0 * z - z * z * z);
  }
  CHECK(forcing_ceiling(1, 3, 12) == doctest::Approx(best).epsilon(1e-10));
}

TEST_CASE("limit equation roots") {
  const auto r = limit_equation_roots(1, 3, 12, 11);
  CHECK(r.z1 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.z2 == doctest::Approx((-1.0 + 3.0 * std::sqrt(5.0)) / 2.0).epsilon(1e-14));
  const auto r0 = limit_equation_roots(1, 3, 12, 0);
  CHECK(r0.z1 == 0.0);
  CHECK(r0.z2 == doctest::Approx(std::sqrt(12.0)).epsilon(1e-14));
  CHECK_FALSE(try_limit_equation_roots(1, 3, 12, 17));
  try {
    limit_equation_roots(1, 3, 12, 17);
    FAIL("expected NoNonnegativeRoot");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoNonnegativeRoot);
  }
  const auto dbl = limit_equation_roots(1, 3, 12, 16);
  CHECK(dbl.z1 == doctest::Approx(2.0));
  CHECK(dbl.z2 == doctest::Approx(2.0));
}

TEST_CASE("property: root residuals and monotonicity in b") {
  for (double p : {1.5, 2.0, 3.0, 4.5}) {
    for (double k0 : {0.3, 1.0, 7.0}) {
      const double Lp1 = 12.0;
      const double bmax = forcing_ceiling(k0, p, Lp1);
      double prev1 = -1.0, prev2 = kInfinity;
      for (int i = 0; i < 100; ++i) {
        const double b = bmax * i / 99.0;
        const auto r = limit_equation_roots(k0, p, Lp1, b);
        auto phi = [&](double z) { return k0 * std::pow(z, p) - Lp1 * z + b; };
        CHECK(std::abs(phi(r.z1)) < 1e-10 * std::max(1.0, Lp1 * r.z1));
        CHECK(std::abs(phi(r.z2)) < 1e-10 * std::max(1.0, Lp1 * r.z2));
        CHECK(r.z1 <= r.z2);
        CHECK(r.z1 >= prev1);
        CHECK(r.z2 <= prev2);
        prev1 = r.z1;
        prev2 = r.z2;
      }
      CHECK(prev1 == doctest::Approx(prev2).epsilon(1e-9));
      const auto r0 = limit_equation_roots(k0, p, Lp1, 0.0);
      CHECK(r0.z1 == 0.0);
      CHECK(r0.z2 == doctest::Approx(std::pow(Lp1 / k0, 1.0 / (p - 1.0))).epsilon(1e-10));
    }
  }
}

TEST_CASE("property: Lp1 = m(n-2-m)") {
  for (double n : {4.0, 7.5, 15.0, 30.0})
    for (double l : {-1.5, 0.0, 2.0})
      for (double p : {1.8, 3.0, 9.0}) {
        const double m = (l + 2) / (p - 1);
        if (n - 2 - m <= 0) continue;
        const auto c = derive_constants(pure(n, l, p));
        CHECK(c.Lp1 == doctest::Approx(m * (n - 2 - m)).epsilon(1e-12));
        CHECK(std::pow(c.L, p - 1) == doctest::Approx(c.Lp1).epsilon(1e-12));
      }
}

TEST_CASE("forced constants, d = m + 2") {
  const ProblemParams pp(15, 3, 0, 1.0, CoefficientProfile::pure_power(1, 0),
                         CoefficientProfile::pure_power(11.0, -3.0));
  const auto c = derive_constants(pp);
  CHECK(c.regime == ForcingRegime::critical);
  CHECK(c.b == doctest::Approx(11.0));
  REQUIRE(c.roots);
  CHECK(c.roots->z1 == doctest::Approx(1.0));
  CHECK(c.roots->z2 == doctest::Approx(2.8541019662496847));
}

TEST_CASE("hypotheses: pure power K") {
  const auto rep = check_hypotheses(pure(15, 0, 3));
  CHECK(rep["K.2"].verdict == Verdict::holds);
  CHECK(*rep["K.2"].witness == 1.0);
  CHECK(rep["K.3"].verdict == Verdict::holds);
  CHECK(rep["K'.2"].verdict == Verdict::holds);
  CHECK(rep["K'.3"].verdict == Verdict::holds);
  CHECK(rep["K.3"].method == "analytic");
}

TEST_CASE("hypotheses: manufactured forcing leading term") {
  const auto K = CoefficientProfile::pure_power(1, 0);
  const auto f = CoefficientProfile::manufactured(
      ReferenceSolution::power(1.0, 0.5), 15, 3, K);
  const ProblemParams pp(15, 3, 0, 1, K, f);
  const auto rep = check_hypotheses(pp);
  CHECK(rep["f.1"].verdict == Verdict::holds);
  CHECK(*rep["f.1"].witness == doctest::Approx(6.25));
  const auto c = derive_constants(pp);
  CHECK(c.d == doctest::Approx(2.5));
  CHECK(c.regime == ForcingRegime::subcritical);
}

TEST_CASE("hypotheses: oscillating K") {
  const auto K = CoefficientProfile::oscillatory(1, 0, 0.5, 1.0);
  const ProblemParams pp(15, 3, 0, 0, K, CoefficientProfile::zero());
  const auto rep = check_hypotheses(pp);
  CHECK(rep["K.2"].verdict == Verdict::holds);
  CHECK(rep["K.3"].verdict == Verdict::fails);
  CHECK(rep["K'.2"].method == "numeric");
  CHECK(rep["K'.2"].verdict == Verdict::holds);
  CHECK(rep["K'.3"].verdict == Verdict::holds);
  CHECK_THROWS_AS(rep["nope"], Error);
}

TEST_CASE("quadrature: rounding-level integrand terminates on the absolute floor") {
  std::size_t calls = 0;
  const auto noise = [&](double t) {
    ++calls;
    return 1e-15 * std::sin(1e7 * t);
  };
  const double v = quadrature::adaptive(noise, 0.0, 1.0, 1e-10, 1e-12);
  CHECK(std::abs(v) < 1e-12);
  CHECK(calls < 1000);
  CHECK(quadrature::adaptive([](double t) { return std::exp(t); }, 0.0, 1.0) ==
        doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
}
