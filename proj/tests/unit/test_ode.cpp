#include <doctest.h>

#include <cmath>

#include "slowdecay/error.hpp"
#include "slowdecay/ode.hpp"

using namespace slowdecay;

TEST_CASE("harmonic oscillator to high accuracy") {
  SecondOrderSystem sys{[](double, double y, double) { return -y; }, {}};
  IntegrateOptions opt;
  opt.tol = {1e-12, 1e-14};
  const auto tr = integrate_second_order(Coordinates::linear, sys, {0, 1, 0},
                                         10.0, opt);
  REQUIRE(tr.reached_target());
  CHECK(tr.samples().back().x == 10.0);
  CHECK(tr.samples().back().y == doctest::Approx(std::cos(10.0)).epsilon(1e-9));
  for (double x : {0.3, 2.7, 5.55, 9.99}) {
    const auto s = tr.at(x);
    CHECK(std::abs(s.y - std::cos(x)) < 1e-9);
    CHECK(std::abs(s.dy + std::sin(x)) < 1e-9);
  }
  CHECK_THROWS_AS(tr.at(10.5), Error);
}

TEST_CASE("backward integration and dense output") {
  SecondOrderSystem sys{[](double, double y, double) { return y; }, {}};
  IntegrateOptions opt;
  const auto tr = integrate_second_order(Coordinates::linear, sys,
                                         {0, 1, -1}, -5.0, opt);
  REQUIRE(tr.reached_target());
  CHECK(tr.direction() == Direction::decreasing);
  CHECK(tr.lo() == -5.0);
  CHECK(tr.hi() == 0.0);
  CHECK(tr.at(-2.5).y == doctest::Approx(std::exp(2.5)).epsilon(1e-8));
  const auto& s = tr.samples();
  for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i].x < s[i - 1].x);
}

TEST_CASE("positivity event") {
  // y = 1 - x^2/2 crosses zero at sqrt(2)
  SecondOrderSystem sys{[](double, double, double) { return -1.0; }, {}};
  IntegrateOptions opt;
  opt.positivity_event = true;
  const auto tr = integrate_second_order(Coordinates::linear, sys, {0, 1, 0},
                                         5.0, opt);
  CHECK(tr.termination().kind == Termination::Kind::positivity_lost);
  CHECK(tr.termination().at == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
  CHECK(tr.samples().back().y <= 1e-14);
  CHECK_THROWS_AS(tr.require_complete(), Error);
}

TEST_CASE("max steps") {
  SecondOrderSystem sys{[](double, double y, double) { return -y; }, {}};
  IntegrateOptions opt;
  opt.max_steps = 5;
  const auto tr = integrate_second_order(Coordinates::linear, sys, {0, 1, 0},
                                         100.0, opt);
  CHECK(tr.termination().kind == Termination::Kind::max_steps);
  try {
    tr.require_complete();
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MaxSteps);
  }
}

TEST_CASE("step underflow near a blow-up") {
  // y' = y^2 type blow-up: y'' = 2 y^3 with y = 1/(1-x)
  SecondOrderSystem sys{[](double, double y, double) { return 2 * y * y * y; }, {}};
  IntegrateOptions opt;
  const auto tr = integrate_second_order(Coordinates::linear, sys, {0, 1, 1},
                                         2.0, opt);
  CHECK_FALSE(tr.reached_target());
  CHECK(tr.termination().at < 1.0);
}

TEST_CASE("invalid tolerance") {
  SecondOrderSystem sys{[](double, double y, double) { return -y; }, {}};
  IntegrateOptions opt;
  opt.tol.rel = 1e-15;
  CHECK_THROWS_AS(integrate_second_order(Coordinates::linear, sys, {0, 1, 0}, 1, opt),
                  Error);
}
