#include "slowdecay/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace slowdecay::quadrature {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

double bisect(const std::function<double(double)>& f, double a, double b,
              double rel_tol, double abs_tol, int depth) {
  double error = 0.0;
  const double value = GK::integrate(f, a, b, 0, 0.0, &error);
  if (depth == 0 || error <= std::max(abs_tol, rel_tol * std::abs(value)))
    return value;
  const double mid = 0.5 * (a + b);
  return bisect(f, a, mid, rel_tol, 0.5 * abs_tol, depth - 1) +
         bisect(f, mid, b, rel_tol, 0.5 * abs_tol, depth - 1);
}

}  // namespace

double adaptive(const std::function<double(double)>& f, double a, double b,
                double rel_tol, double abs_tol) {
  if (a == b) return 0.0;
  return bisect(f, a, b, rel_tol, abs_tol, 20);
}

}  // namespace slowdecay::quadrature
