#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <variant>

namespace slowdecay {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Open interval (lo, hi) of radii.
struct Interval {
  double lo = 0.0;
  double hi = kInfinity;

  bool contains(double r) const { return r > lo && r < hi; }
};

/// Leading behaviour coef * r^exponent.
struct PowerLaw {
  double coef = 0.0;
  double exponent = 0.0;
};

/// u*(r) = coef * r^(-rate)
struct PowerSolution {
  double coef = 1.0;
  double rate = 0.5;
};

/// u*(r) = coef * log(scale / r), positive on (0, scale)
struct LogSolution {
  double coef = 1.0;
  double scale = 1.0;
};

/// An exact reference solution used to manufacture a forcing term.
class ReferenceSolution {
 public:
  using Spec = std::variant<PowerSolution, LogSolution>;

  explicit ReferenceSolution(Spec spec);

  static ReferenceSolution power(double coef, double rate) {
    return ReferenceSolution(PowerSolution{coef, rate});
  }
  static ReferenceSolution logarithmic(double coef, double scale) {
    return ReferenceSolution(LogSolution{coef, scale});
  }

  const Spec& spec() const { return spec_; }
  Interval domain() const;

  double value(double r) const;
  double d1(double r) const;
  double d2(double r) const;
  double d3(double r) const;

 private:
  Spec spec_;
};

class CoefficientProfile;

namespace family {

struct Zero {};

/// coef * r^exponent
struct PurePower {
  double coef = 1.0;
  double exponent = 0.0;
};

/// coef * r^exponent * (1 + amplitude * r^perturbation_exponent)
struct PerturbedPower {
  double coef = 1.0;
  double exponent = 0.0;
  double amplitude = 0.0;
  double perturbation_exponent = 1.0;
};

/// coef * r^exponent * (1 + amplitude * sin(frequency * r)), |amplitude| < 1
struct Oscillatory {
  double coef = 1.0;
  double exponent = 0.0;
  double amplitude = 0.0;
  double frequency = 1.0;
};

/// f = -(u*'' + (n-1)/r u*' + K u*^p), the forcing (with mu = 1) that makes
/// u* an exact solution.
struct Manufactured {
  ReferenceSolution solution = ReferenceSolution::power(1.0, 0.5);
  double n = 3.0;
  double p = 2.0;
  std::shared_ptr<const CoefficientProfile> K;
};

}  // namespace family

/// A radial coefficient K(r) or forcing f(r) from one of the built-in
/// families. Values and derivatives are analytic.
class CoefficientProfile {
 public:
  using Family = std::variant<family::Zero, family::PurePower,
                              family::PerturbedPower, family::Oscillatory,
                              family::Manufactured>;

  explicit CoefficientProfile(Family family);

  static CoefficientProfile zero() { return CoefficientProfile(family::Zero{}); }
  static CoefficientProfile pure_power(double coef, double exponent) {
    return CoefficientProfile(family::PurePower{coef, exponent});
  }
  static CoefficientProfile perturbed_power(double coef, double exponent,
                                            double amplitude,
                                            double perturbation_exponent) {
    return CoefficientProfile(family::PerturbedPower{
        coef, exponent, amplitude, perturbation_exponent});
  }
  static CoefficientProfile oscillatory(double coef, double exponent,
                                        double amplitude, double frequency) {
    return CoefficientProfile(
        family::Oscillatory{coef, exponent, amplitude, frequency});
  }
  static CoefficientProfile manufactured(ReferenceSolution solution, double n,
                                         double p,
                                         const CoefficientProfile& K);

  const Family& family() const { return family_; }
  std::string family_name() const;
  bool is_zero() const {
    return std::holds_alternative<family::Zero>(family_);
  }
  bool is_pure_power() const {
    return std::holds_alternative<family::PurePower>(family_);
  }

  /// Radii on which the profile may be evaluated.
  Interval domain() const { return domain_; }

  /// Throws DomainError outside domain().
  double value(double r) const;
  double derivative(double r) const;

  /// r^s * F(r); computed termwise for power families so that
  /// r^(-l) * (k0 r^l) is exactly k0.
  double weighted(double r, double s) const;
  /// d/dt [e^(s t) F(e^t)] at t = log r, i.e. r^s (s F + r F').
  double weighted_log_derivative(double r, double s) const;

  /// Leading term c r^e at the origin; nullopt for the zero profile or when
  /// the leading coefficients cancel and the next order is not known.
  std::optional<PowerLaw> at_zero() const;
  /// Exponent e with F = O(r^e) as r -> infinity; -inf for the zero profile,
  /// nullopt when the domain is bounded.
  std::optional<double> growth_at_infinity() const;

 private:
  void check_domain(double r) const;

  Family family_;
  Interval domain_;
};

}  // namespace slowdecay
