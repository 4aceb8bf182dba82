#pragma once

#include <cmath>

namespace slowdecay {

inline bool is_integer_exponent(double p) {
  return p == std::round(p) && std::abs(p) <= 64.0;
}

/// base^p. Integer p uses repeated multiplication (valid for any sign of
/// base); otherwise exp(p log base), which requires base > 0.
inline double power(double base, double p) {
  if (is_integer_exponent(p)) {
    long k = static_cast<long>(std::abs(p));
    double result = 1.0;
    double b = base;
    while (k > 0) {
      if (k & 1) result *= b;
      b *= b;
      k >>= 1;
    }
    return p < 0 ? 1.0 / result : result;
  }
  return std::exp(p * std::log(base));
}

/// Positivity threshold for solution values.
inline constexpr double kTolPos = 1e-14;

/// base^p with base clamped at kTolPos for non-integer p; used inside the
/// integrators where stage values may dip below zero just before a
/// positivity event.
inline double clamped_power(double base, double p) {
  if (is_integer_exponent(p)) return power(base, p);
  return power(base < kTolPos ? kTolPos : base, p);
}

}  // namespace slowdecay
