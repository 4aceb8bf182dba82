#pragma once

#include <array>
#include <functional>

namespace slowdecay::quadrature {

/// 5-point Gauss-Legendre nodes on [0, 1] and matching weights (sum 1).
inline constexpr std::array<double, 5> kGaussNodes{
    0.046910077030668003601, 0.23076534494715845448, 0.5,
    0.76923465505284154552, 0.95308992296933199640};
inline constexpr std::array<double, 5> kGaussWeights{
    0.11846344252809454376, 0.23931433524968323402, 0.28444444444444444444,
    0.23931433524968323402, 0.11846344252809454376};

/// Exact for polynomials of degree <= 9.
template <class F>
double gauss5(F&& f, double a, double b) {
  const double h = b - a;
  double sum = 0.0;
  for (std::size_t i = 0; i < kGaussNodes.size(); ++i)
    sum += kGaussWeights[i] * f(a + h * kGaussNodes[i]);
  return sum * h;
}

/// Adaptive Gauss-Kronrod on [a, b]. A subinterval is accepted once its
/// error estimate is below max(abs_tol, rel_tol * |value|), so integrands
/// that are pure rounding noise terminate quickly.
double adaptive(const std::function<double(double)>& f, double a, double b,
                double rel_tol = 1e-12, double abs_tol = 1e-15);

}  // namespace slowdecay::quadrature
