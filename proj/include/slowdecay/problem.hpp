#pragma once

#include <optional>
#include <string>
#include <vector>

#include "slowdecay/profiles.hpp"

namespace slowdecay {

/// The equation instance  Δu + K(|x|) u^p + mu f(|x|) = 0  in dimension n.
/// n is a real number >= 3 so that continuation studies in n are possible;
/// integrality is a front-end concern.
class ProblemParams {
 public:
  ProblemParams(double n, double p, double l, double mu, CoefficientProfile K,
                CoefficientProfile f);

  double n() const { return n_; }
  double p() const { return p_; }
  double l() const { return l_; }
  double mu() const { return mu_; }
  const CoefficientProfile& K() const { return K_; }
  const CoefficientProfile& f() const { return f_; }

  /// mu == 0 or f is the zero profile.
  bool unforced() const { return mu_ == 0.0 || f_.is_zero(); }

 private:
  double n_;
  double p_;
  double l_;
  double mu_;
  CoefficientProfile K_;
  CoefficientProfile f_;
};

/// The critical exponent; nullopt value encodes +infinity.
struct CriticalExponent {
  std::optional<double> finite;

  bool is_infinite() const { return !finite.has_value(); }
  /// p > p_c; always false for the infinite branch.
  bool exceeded_by(double p) const { return finite && p > *finite; }
};

struct RootPair {
  double z1 = 0.0;
  double z2 = 0.0;
};

/// Where the forcing sits relative to the weight r^(m+2) at the origin.
enum class ForcingRegime {
  none,         ///< mu == 0 or f == 0
  subcritical,  ///< 0 < d < m+2: g(t) -> 0
  critical,     ///< d == m+2: g(t) -> b
  supercritical ///< d > m+2 or d <= 0: outside the classification
};

std::string to_string(ForcingRegime regime);

struct DerivedConstants {
  double m = 0.0;
  double L = 0.0;
  double Lp1 = 0.0;  ///< L^(p-1) = m (n-2-m)
  double a = 0.0;    ///< damping coefficient n-2-2m
  std::optional<double> lambda2;
  CriticalExponent p_c;
  std::optional<double> k0;  ///< lim r^(-l) K(r) at 0 when K ~ k0 r^l
  ForcingRegime regime = ForcingRegime::none;
  double d = 0.0;  ///< decay exponent of f at 0 (0 when unforced)
  double b = 0.0;  ///< constant of the limit equation (mu * lim r^d f for d = m+2, else 0)
  std::optional<double> b_max;
  std::optional<RootPair> roots;
};

/// Nonnegative z from (Lp1 / k0)^(1/(p-1)), the nonzero root when b = 0.
double unforced_root(double k0, double p, double Lp1);

DerivedConstants derive_constants(const ProblemParams& params);

CriticalExponent critical_exponent(double n, double l);

/// max over z >= 0 of Lp1 z - k0 z^p.
double forcing_ceiling(double k0, double p, double Lp1);

/// Roots 0 <= z1 <= z2 of k0 z^p - Lp1 z + b = 0; nullopt when b > b_max.
std::optional<RootPair> try_limit_equation_roots(double k0, double p,
                                                 double Lp1, double b);
/// As above but throws NoNonnegativeRoot when b > b_max.
RootPair limit_equation_roots(double k0, double p, double Lp1, double b);

enum class Verdict { holds, fails, not_decidable };
std::string to_string(Verdict verdict);

struct HypothesisCheck {
  std::string name;  ///< "K.1", "K'.2", "f.1", ...
  Verdict verdict = Verdict::not_decidable;
  std::optional<double> witness;
  std::string method;  ///< "analytic" or "numeric"
  std::string detail;
};

struct HypothesisReport {
  std::vector<HypothesisCheck> checks;

  const HypothesisCheck& operator[](const std::string& name) const;
};

HypothesisReport check_hypotheses(const ProblemParams& params);

}  // namespace slowdecay
