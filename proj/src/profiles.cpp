#include "slowdecay/profiles.hpp"

#include <cmath>
#include <sstream>

#include "slowdecay/error.hpp"
#include "slowdecay/power.hpp"

namespace slowdecay {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string fmt_radius(double r) {
  std::ostringstream os;
  os.precision(17);
  os << r;
  return os.str();
}

Interval perturbed_domain(const family::PerturbedPower& f) {
  if (f.amplitude >= 0.0) return {};
  if (f.perturbation_exponent == 0.0) {
    if (1.0 + f.amplitude <= 0.0)
      fail(ErrorKind::InvalidParameters,
           "perturbed power profile is nonpositive everywhere");
    return {};
  }
  const double edge =
      std::pow(-1.0 / f.amplitude, 1.0 / f.perturbation_exponent);
  if (f.perturbation_exponent > 0.0) return {0.0, edge};
  return {edge, kInfinity};
}

/// Leading power law of K at zero for manufactured profiles.
PowerLaw manufactured_K_leading(const family::Manufactured& m) {
  auto lead = m.K->at_zero();
  if (!lead)
    fail(ErrorKind::NotApplicable,
         "manufactured forcing needs a K with a known leading term at 0");
  return *lead;
}

}  // namespace

// ---------------------------------------------------------------------------
// ReferenceSolution

ReferenceSolution::ReferenceSolution(Spec spec) : spec_(spec) {
  std::visit(overloaded{
                 [](const PowerSolution& s) {
                   if (!(s.coef > 0.0) || !std::isfinite(s.rate))
                     fail(ErrorKind::InvalidParameters,
                          "power reference solution needs coef > 0");
                 },
                 [](const LogSolution& s) {
                   if (!(s.coef > 0.0) || !(s.scale > 0.0))
                     fail(ErrorKind::InvalidParameters,
                          "log reference solution needs coef, scale > 0");
                 },
             },
             spec_);
}

Interval ReferenceSolution::domain() const {
  return std::visit(
      overloaded{
          [](const PowerSolution&) { return Interval{}; },
          [](const LogSolution& s) { return Interval{0.0, s.scale}; },
      },
      spec_);
}

double ReferenceSolution::value(double r) const {
  return std::visit(
      overloaded{
          [r](const PowerSolution& s) { return s.coef * std::pow(r, -s.rate); },
          [r](const LogSolution& s) { return s.coef * std::log(s.scale / r); },
      },
      spec_);
}

double ReferenceSolution::d1(double r) const {
  return std::visit(overloaded{
                        [r](const PowerSolution& s) {
                          return -s.rate * s.coef * std::pow(r, -s.rate - 1.0);
                        },
                        [r](const LogSolution& s) { return -s.coef / r; },
                    },
                    spec_);
}

double ReferenceSolution::d2(double r) const {
  return std::visit(overloaded{
                        [r](const PowerSolution& s) {
                          return s.rate * (s.rate + 1.0) * s.coef *
                                 std::pow(r, -s.rate - 2.0);
                        },
                        [r](const LogSolution& s) { return s.coef / (r * r); },
                    },
                    spec_);
}

double ReferenceSolution::d3(double r) const {
  return std::visit(overloaded{
                        [r](const PowerSolution& s) {
                          return -s.rate * (s.rate + 1.0) * (s.rate + 2.0) *
                                 s.coef * std::pow(r, -s.rate - 3.0);
                        },
                        [r](const LogSolution& s) {
                          return -2.0 * s.coef / (r * r * r);
                        },
                    },
                    spec_);
}

// ---------------------------------------------------------------------------
// CoefficientProfile

CoefficientProfile::CoefficientProfile(Family family)
    : family_(std::move(family)) {
  domain_ = std::visit(
      overloaded{
          [](const family::Zero&) { return Interval{}; },
          [](const family::PurePower& f) {
            if (!(f.coef > 0.0) || !std::isfinite(f.exponent))
              fail(ErrorKind::InvalidParameters,
                   "pure power profile needs coef > 0");
            return Interval{};
          },
          [](const family::PerturbedPower& f) {
            if (!(f.coef > 0.0))
              fail(ErrorKind::InvalidParameters,
                   "perturbed power profile needs coef > 0");
            return perturbed_domain(f);
          },
          [](const family::Oscillatory& f) {
            if (!(f.coef > 0.0) || !(std::abs(f.amplitude) < 1.0))
              fail(ErrorKind::InvalidParameters,
                   "oscillatory profile needs coef > 0 and |amplitude| < 1");
            return Interval{};
          },
          [](const family::Manufactured& f) {
            if (!f.K)
              fail(ErrorKind::InvalidParameters,
                   "manufactured profile needs a K profile");
            const Interval d = f.solution.domain();
            const Interval k = f.K->domain();
            return Interval{std::max(d.lo, k.lo), std::min(d.hi, k.hi)};
          },
      },
      family_);
}

CoefficientProfile CoefficientProfile::manufactured(ReferenceSolution solution,
                                                    double n, double p,
                                                    const CoefficientProfile& K) {
  return CoefficientProfile(family::Manufactured{
      solution, n, p, std::make_shared<const CoefficientProfile>(K)});
}

std::string CoefficientProfile::family_name() const {
  return std::visit(
      overloaded{
          [](const family::Zero&) { return std::string("zero"); },
          [](const family::PurePower&) { return std::string("pure_power"); },
          [](const family::PerturbedPower&) {
            return std::string("perturbed_power");
          },
          [](const family::Oscillatory&) { return std::string("oscillatory"); },
          [](const family::Manufactured&) {
            return std::string("manufactured");
          },
      },
      family_);
}

void CoefficientProfile::check_domain(double r) const {
  if (!domain_.contains(r))
    fail(ErrorKind::DomainError, family_name() + " profile evaluated at r=" +
                                     fmt_radius(r) + " outside its domain");
}

double CoefficientProfile::value(double r) const {
  check_domain(r);
  return weighted(r, 0.0);
}

double CoefficientProfile::derivative(double r) const {
  check_domain(r);
  return std::visit(
      overloaded{
          [](const family::Zero&) { return 0.0; },
          [r](const family::PurePower& f) {
            return f.coef * f.exponent * std::pow(r, f.exponent - 1.0);
          },
          [r](const family::PerturbedPower& f) {
            const double e2 = f.exponent + f.perturbation_exponent;
            return f.coef * (f.exponent * std::pow(r, f.exponent - 1.0) +
                             f.amplitude * e2 * std::pow(r, e2 - 1.0));
          },
          [r](const family::Oscillatory& f) {
            const double w = f.frequency * r;
            return f.coef * std::pow(r, f.exponent - 1.0) *
                   (f.exponent * (1.0 + f.amplitude * std::sin(w)) +
                    f.amplitude * w * std::cos(w));
          },
          [r](const family::Manufactured& f) {
            const auto& u = f.solution;
            const double us = u.value(r), u1 = u.d1(r), u2 = u.d2(r),
                         u3 = u.d3(r);
            const double K = f.K->value(r), dK = f.K->derivative(r);
            const double lap_d =
                u3 + (f.n - 1.0) / r * u2 - (f.n - 1.0) / (r * r) * u1;
            return -(lap_d + dK * power(us, f.p) +
                     f.p * K * power(us, f.p - 1.0) * u1);
          },
      },
      family_);
}

double CoefficientProfile::weighted(double r, double s) const {
  check_domain(r);
  return std::visit(
      overloaded{
          [](const family::Zero&) { return 0.0; },
          [r, s](const family::PurePower& f) {
            return f.coef * std::pow(r, f.exponent + s);
          },
          [r, s](const family::PerturbedPower& f) {
            return f.coef *
                   (std::pow(r, f.exponent + s) +
                    f.amplitude *
                        std::pow(r, f.exponent + f.perturbation_exponent + s));
          },
          [r, s](const family::Oscillatory& f) {
            return f.coef * std::pow(r, f.exponent + s) *
                   (1.0 + f.amplitude * std::sin(f.frequency * r));
          },
          [r, s](const family::Manufactured& f) {
            const auto& u = f.solution;
            const double us = u.value(r);
            const double f_r = -(u.d2(r) + (f.n - 1.0) / r * u.d1(r) +
                                 f.K->value(r) * power(us, f.p));
            return std::pow(r, s) * f_r;
          },
      },
      family_);
}

double CoefficientProfile::weighted_log_derivative(double r, double s) const {
  check_domain(r);
  if (const auto* f = std::get_if<family::PurePower>(&family_))
    return f->coef * (f->exponent + s) * std::pow(r, f->exponent + s);
  if (const auto* f = std::get_if<family::PerturbedPower>(&family_)) {
    const double e2 = f->exponent + f->perturbation_exponent + s;
    return f->coef * ((f->exponent + s) * std::pow(r, f->exponent + s) +
                      f->amplitude * e2 * std::pow(r, e2));
  }
  if (is_zero()) return 0.0;
  return std::pow(r, s) * (s * weighted(r, 0.0) + r * derivative(r));
}

std::optional<PowerLaw> CoefficientProfile::at_zero() const {
  return std::visit(
      overloaded{
          [](const family::Zero&) -> std::optional<PowerLaw> {
            return std::nullopt;
          },
          [](const family::PurePower& f) -> std::optional<PowerLaw> {
            return PowerLaw{f.coef, f.exponent};
          },
          [](const family::PerturbedPower& f) -> std::optional<PowerLaw> {
            if (f.perturbation_exponent > 0.0 || f.amplitude == 0.0)
              return PowerLaw{f.coef, f.exponent};
            if (f.perturbation_exponent == 0.0)
              return PowerLaw{f.coef * (1.0 + f.amplitude), f.exponent};
            return PowerLaw{f.coef * f.amplitude,
                            f.exponent + f.perturbation_exponent};
          },
          [](const family::Oscillatory& f) -> std::optional<PowerLaw> {
            return PowerLaw{f.coef, f.exponent};
          },
          [](const family::Manufactured& f) -> std::optional<PowerLaw> {
            if (const auto* s = std::get_if<LogSolution>(&f.solution.spec()))
              return PowerLaw{s->coef * (f.n - 2.0), -2.0};
            const auto& s = std::get<PowerSolution>(f.solution.spec());
            const PowerLaw k = manufactured_K_leading(f);
            // -(u*'' + (n-1)/r u*') = A r^e1 and -K u*^p ~ B r^e2
            const double A = s.coef * s.rate * (f.n - 2.0 - s.rate);
            const double e1 = -s.rate - 2.0;
            const double B = -k.coef * power(s.coef, f.p);
            const double e2 = k.exponent - f.p * s.rate;
            if (std::abs(e1 - e2) < 1e-12) {
              const double c = A + B;
              if (std::abs(c) <= 1e-12 * std::max(std::abs(A), std::abs(B)))
                return std::nullopt;
              return PowerLaw{c, e1};
            }
            if (A != 0.0 && e1 < e2) return PowerLaw{A, e1};
            return PowerLaw{B, e2};
          },
      },
      family_);
}

std::optional<double> CoefficientProfile::growth_at_infinity() const {
  if (domain_.hi < kInfinity) return std::nullopt;
  return std::visit(
      overloaded{
          [](const family::Zero&) -> std::optional<double> {
            return -kInfinity;
          },
          [](const family::PurePower& f) -> std::optional<double> {
            return f.exponent;
          },
          [](const family::PerturbedPower& f) -> std::optional<double> {
            if (f.amplitude == 0.0) return f.exponent;
            return std::max(f.exponent, f.exponent + f.perturbation_exponent);
          },
          [](const family::Oscillatory& f) -> std::optional<double> {
            return f.exponent;
          },
          [](const family::Manufactured& f) -> std::optional<double> {
            const auto& s = std::get<PowerSolution>(f.solution.spec());
            const auto gk = f.K->growth_at_infinity();
            if (!gk) return std::nullopt;
            const double A = s.coef * s.rate * (f.n - 2.0 - s.rate);
            const double e2 = *gk - f.p * s.rate;
            if (A == 0.0) return e2;
            return std::max(-s.rate - 2.0, e2);
          },
      },
      family_);
}

}  // namespace slowdecay
