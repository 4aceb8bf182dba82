#pragma once

#include <cmath>

#include "slowdecay/problem.hpp"

namespace fx {

using namespace slowdecay;

inline ProblemParams pure(double n = 15, double l = 0, double p = 3,
                          double k0 = 1) {
  return ProblemParams(n, p, l, 0.0, CoefficientProfile::pure_power(k0, l),
                       CoefficientProfile::zero());
}

/// b r^-(m+2) forcing on the n=15, p=3 pure case
inline ProblemParams forced(double b) {
  return ProblemParams(15, 3, 0, 1.0, CoefficientProfile::pure_power(1, 0),
                       CoefficientProfile::pure_power(b, -3.0));
}

inline ProblemParams manufactured_half() {
  const auto K = CoefficientProfile::pure_power(1, 0);
  return ProblemParams(15, 3, 0, 1.0, K,
                       CoefficientProfile::manufactured(
                           ReferenceSolution::power(1.0, 0.5), 15, 3, K));
}

inline const double kSqrt12 = std::sqrt(12.0);

}  // namespace fx
