#include "slowdecay/problem.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "slowdecay/error.hpp"
#include "slowdecay/power.hpp"
#include "slowdecay/quadrature.hpp"

namespace slowdecay {

namespace {

std::string str(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

bool same_exponent(double a, double b) { return std::abs(a - b) <= 1e-12; }

}  // namespace

ProblemParams::ProblemParams(double n, double p, double l, double mu,
                             CoefficientProfile K, CoefficientProfile f)
    : n_(n), p_(p), l_(l), mu_(mu), K_(std::move(K)), f_(std::move(f)) {
  if (!(n_ >= 3.0) || !std::isfinite(n_))
    fail(ErrorKind::InvalidParameters, "dimension n must be >= 3");
  if (!(p_ > 1.0) || !std::isfinite(p_))
    fail(ErrorKind::InvalidParameters, "exponent p must be > 1");
  if (!(l_ > -2.0) || !std::isfinite(l_))
    fail(ErrorKind::InvalidParameters, "slow-decay exponent l must be > -2");
  if (!(mu_ >= 0.0) || !std::isfinite(mu_))
    fail(ErrorKind::InvalidParameters, "forcing amplitude mu must be >= 0");
  if (K_.is_zero() ||
      std::holds_alternative<family::Manufactured>(K_.family()))
    fail(ErrorKind::InvalidParameters,
         "K must be a positive power-type profile");
  if (const auto* mf = std::get_if<family::Manufactured>(&f_.family())) {
    if (mf->n != n_ || mf->p != p_)
      fail(ErrorKind::InvalidParameters,
           "manufactured forcing was built for a different (n, p)");
  }
}

std::string to_string(ForcingRegime regime) {
  switch (regime) {
    case ForcingRegime::none: return "none";
    case ForcingRegime::subcritical: return "subcritical";
    case ForcingRegime::critical: return "critical";
    case ForcingRegime::supercritical: return "supercritical";
  }
  return "?";
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::not_decidable: return "not_decidable";
  }
  return "?";
}

CriticalExponent critical_exponent(double n, double l) {
  if (!(n >= 3.0) || !(l > -2.0))
    fail(ErrorKind::InvalidParameters, "critical exponent needs n >= 3, l > -2");
  if (n <= 10.0 + 4.0 * l) return {};
  const double n2 = n - 2.0;
  const double l2 = l + 2.0;
  const double numerator = n2 * n2 - 2.0 * l2 * (n + l) +
                           2.0 * l2 * std::sqrt((n + l) * (n + l) - n2 * n2);
  return {numerator / (n2 * (n - 10.0 - 4.0 * l))};
}

double unforced_root(double k0, double p, double Lp1) {
  return std::pow(Lp1 / k0, 1.0 / (p - 1.0));
}

double forcing_ceiling(double k0, double p, double Lp1) {
  if (!(k0 > 0.0) || !(p > 1.0) || !(Lp1 > 0.0))
    fail(ErrorKind::InvalidParameters, "forcing ceiling needs k0, Lp1 > 0, p > 1");
  const double zstar = std::pow(Lp1 / (p * k0), 1.0 / (p - 1.0));
  return (1.0 - 1.0 / p) * Lp1 * zstar;
}

namespace {

/// Safeguarded Newton on a bracket [lo, hi] where phi changes sign.
double bracketed_newton(double k0, double p, double Lp1, double b, double lo,
                        double hi) {
  auto phi = [&](double z) { return k0 * power(z, p) - Lp1 * z + b; };
  auto dphi = [&](double z) { return p * k0 * power(z, p - 1.0) - Lp1; };
  double flo = phi(lo);
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 300; ++it) {
    const double fx = phi(x);
    if (fx == 0.0) break;
    if ((fx < 0) == (flo < 0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
    }
    const double df = dphi(x);
    double next = df != 0.0 ? x - fx / df : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const bool small_step = std::abs(next - x) <= 4e-16 * std::max(1.0, x);
    x = next;
    if (small_step && std::abs(phi(x)) < 1e-12 * std::max(1.0, Lp1 * x))
      break;
  }
  return x;
}

}  // namespace

std::optional<RootPair> try_limit_equation_roots(double k0, double p,
                                                 double Lp1, double b) {
  if (!(k0 > 0.0) || !(p > 1.0) || !(Lp1 > 0.0) || !(b >= 0.0))
    fail(ErrorKind::InvalidParameters,
         "limit equation needs k0, Lp1 > 0, p > 1, b >= 0");
  const double bmax = forcing_ceiling(k0, p, Lp1);
  const double zstar = std::pow(Lp1 / (p * k0), 1.0 / (p - 1.0));
  if (b > bmax * (1.0 + 1e-12)) return std::nullopt;
  if (b >= bmax * (1.0 - 1e-12)) return RootPair{zstar, zstar};
  const double zhi = std::pow(2.0 * Lp1 / k0, 1.0 / (p - 1.0)) + 1.0;
  RootPair roots;
  roots.z1 = b == 0.0 ? 0.0 : bracketed_newton(k0, p, Lp1, b, 0.0, zstar);
  roots.z2 = bracketed_newton(k0, p, Lp1, b, zstar, zhi);
  return roots;
}

RootPair limit_equation_roots(double k0, double p, double Lp1, double b) {
  auto roots = try_limit_equation_roots(k0, p, Lp1, b);
  if (!roots)
    fail(ErrorKind::NoNonnegativeRoot,
         "b=" + str(b) + " exceeds the forcing ceiling b_max=" +
             str(forcing_ceiling(k0, p, Lp1)) +
             "; k0 z^p - Lp1 z + b has no nonnegative root");
  return *roots;
}

DerivedConstants derive_constants(const ProblemParams& params) {
  const double n = params.n(), p = params.p(), l = params.l();
  DerivedConstants c;
  c.m = (l + 2.0) / (p - 1.0);
  const double gap = n - 2.0 - c.m;
  if (!(gap > 0.0))
    fail(ErrorKind::DegenerateExponents,
         "n - 2 - m = " + str(gap) + " <= 0, so L = [m(n-2-m)]^(1/(p-1)) is "
         "undefined");
  c.Lp1 = c.m * gap;
  c.L = std::pow(c.Lp1, 1.0 / (p - 1.0));
  c.a = n - 2.0 - 2.0 * c.m;
  const double disc = c.a * c.a - 4.0 * (l + 2.0) * gap;
  if (disc >= 0.0) c.lambda2 = 0.5 * (c.a + std::sqrt(disc));
  c.p_c = critical_exponent(n, l);

  if (auto lead = params.K().at_zero();
      lead && same_exponent(lead->exponent, l) && lead->coef > 0.0)
    c.k0 = lead->coef;

  if (params.unforced()) {
    c.regime = ForcingRegime::none;
  } else if (auto lead = params.f().at_zero()) {
    c.d = -lead->exponent;
    if (std::abs(c.d - (c.m + 2.0)) <= 1e-9 * (c.m + 2.0)) {
      c.regime = ForcingRegime::critical;
      c.b = params.mu() * lead->coef;
    } else if (c.d > 0.0 && c.d < c.m + 2.0) {
      c.regime = ForcingRegime::subcritical;
    } else {
      c.regime = ForcingRegime::supercritical;
    }
  } else {
    c.regime = ForcingRegime::supercritical;
  }

  if (c.k0) {
    c.b_max = forcing_ceiling(*c.k0, p, c.Lp1);
    if (c.regime != ForcingRegime::supercritical && c.b >= 0.0)
      c.roots = try_limit_equation_roots(*c.k0, p, c.Lp1, c.b);
  }
  return c;
}

// ---------------------------------------------------------------------------
// Hypotheses

const HypothesisCheck& HypothesisReport::operator[](
    const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  fail(ErrorKind::InvalidParameters, "no hypothesis named " + name);
}

namespace {

constexpr double kEpsQ = 1e-8;
constexpr double kRCut = 1.0;

struct SplitIntegral {
  double value = 0.0;
  bool converged = false;
};

/// Integral over (eps_q, r_cut] of the positive (sign=+1) or negative
/// (sign=-1) part of d/dt[r^s F] / r, computed in t = log r. Declared
/// convergent when halving eps_q moves it by < 1e-6 relative.
SplitIntegral sign_split_integral(const CoefficientProfile& F, double s,
                                  int sign) {
  auto integrand = [&](double t) {
    const double v = sign * F.weighted_log_derivative(std::exp(t), s);
    return v > 0.0 ? v : 0.0;
  };
  auto over = [&](double t0, double t1) {
    // unit subintervals keep kinks of the positive part local
    double sum = 0.0;
    const int pieces = std::max(1, static_cast<int>(std::ceil(t1 - t0)));
    const double h = (t1 - t0) / pieces;
    for (int i = 0; i < pieces; ++i)
      sum += quadrature::adaptive(integrand, t0 + i * h, t0 + (i + 1) * h,
                                  1e-10, 1e-12);
    return sum;
  };
  const double t_eps = std::log(kEpsQ);
  SplitIntegral out;
  out.value = over(t_eps, std::log(kRCut));
  const double extra = over(std::log(kEpsQ / 2.0), t_eps);
  out.converged = std::abs(extra) < 1e-6 * std::abs(out.value) ||
                  std::abs(extra) < 1e-14;
  return out;
}

HypothesisCheck integral_check(const std::string& name,
                               const CoefficientProfile& F, double s, int sign) {
  HypothesisCheck c{name, Verdict::not_decidable, std::nullopt, "numeric", ""};
  if (F.domain().lo > kEpsQ / 2.0 || F.domain().hi < kRCut) {
    c.detail = "profile not defined on the whole of (0, 1]";
    return c;
  }
  const auto r = sign_split_integral(F, s, sign);
  c.witness = r.value;
  c.verdict = r.converged ? Verdict::holds : Verdict::fails;
  c.detail = r.converged ? "integral on (1e-8, 1] stable under halving eps"
                         : "integral still growing as eps -> 0";
  return c;
}

/// Sign of d/dr(r^-l K) sampled on log-spaced radii.
HypothesisCheck monotone_check(const CoefficientProfile& K, double l) {
  HypothesisCheck c{"K.3", Verdict::holds, 0.0, "numeric", ""};
  const Interval dom = K.domain();
  const double lo = std::max(dom.lo * (1.0 + 1e-9), 1e-8);
  const double hi = std::min(dom.hi * (1.0 - 1e-9), 1e8);
  const int samples = 4001;
  double worst = -kInfinity;
  double where = lo;
  for (int i = 0; i < samples; ++i) {
    const double r = lo * std::pow(hi / lo, static_cast<double>(i) / (samples - 1));
    const double d = K.weighted_log_derivative(r, -l) / r;
    if (d > worst) {
      worst = d;
      where = r;
    }
  }
  c.witness = worst;
  const double scale = std::abs(K.weighted(where, -l));
  if (worst > 1e-12 * std::max(1.0, scale)) {
    c.verdict = Verdict::fails;
    c.detail = "d/dr(r^-l K) > 0 at r=" + str(where);
  } else {
    c.detail = "d/dr(r^-l K) <= 0 on sampled radii in [1e-8, 1e8]";
  }
  return c;
}

}  // namespace

HypothesisReport check_hypotheses(const ProblemParams& params) {
  const DerivedConstants c = derive_constants(params);
  const double n = params.n(), p = params.p(), l = params.l();
  const CoefficientProfile& K = params.K();
  const CoefficientProfile& f = params.f();
  HypothesisReport report;
  auto add = [&](HypothesisCheck h) { report.checks.push_back(std::move(h)); };

  // (K.1) K = k_inf r^l + O(r^-d1) at infinity, d1 > n - lambda2 - m(p+1)
  {
    HypothesisCheck h{"K.1", Verdict::not_decidable, std::nullopt, "analytic", ""};
    std::optional<double> d1;
    bool leading_ok = false;
    if (const auto* k = std::get_if<family::PurePower>(&K.family())) {
      leading_ok = same_exponent(k->exponent, l);
      d1 = kInfinity;
    } else if (const auto* k = std::get_if<family::PerturbedPower>(&K.family())) {
      const double e2 = k->exponent + k->perturbation_exponent;
      if (k->amplitude == 0.0) {
        leading_ok = same_exponent(k->exponent, l);
        d1 = kInfinity;
      } else if (k->perturbation_exponent < 0.0) {
        leading_ok = same_exponent(k->exponent, l);
        d1 = -e2;
      } else {
        leading_ok = same_exponent(e2, l);
        d1 = -k->exponent;
      }
    } else if (const auto* k = std::get_if<family::Oscillatory>(&K.family())) {
      leading_ok = same_exponent(k->exponent, l);
      d1 = k->amplitude == 0.0 ? kInfinity : -k->exponent;
    }
    if (!d1) {
      h.detail = "profile family has no analytic expansion at infinity";
    } else if (!leading_ok) {
      h.verdict = Verdict::fails;
      h.detail = "leading exponent at infinity differs from l";
    } else if (std::isinf(*d1)) {
      h.verdict = Verdict::holds;
      h.detail = "no remainder term";
    } else if (!c.lambda2) {
      h.witness = *d1;
      h.detail = "lambda2 undefined (negative discriminant)";
    } else {
      const double threshold = n - *c.lambda2 - c.m * (p + 1.0);
      h.witness = *d1;
      h.verdict = *d1 > threshold ? Verdict::holds : Verdict::fails;
      h.detail = "d1=" + str(*d1) + " vs threshold " + str(threshold);
    }
    add(h);
  }

  // (K.2) lim r^-l K = k0 > 0
  {
    HypothesisCheck h{"K.2", Verdict::fails, std::nullopt, "analytic", ""};
    if (auto lead = K.at_zero()) {
      if (same_exponent(lead->exponent, l) && lead->coef > 0.0) {
        h.verdict = Verdict::holds;
        h.witness = lead->coef;
        h.detail = "k0=" + str(lead->coef);
      } else if (lead->exponent > l) {
        h.witness = 0.0;
        h.detail = "r^-l K -> 0";
      } else {
        h.witness = kInfinity;
        h.detail = "r^-l K -> infinity";
      }
    } else {
      h.verdict = Verdict::not_decidable;
    }
    add(h);
  }

  // (K.3), (K'.2), (K'.3)
  if (const auto* k = std::get_if<family::PurePower>(&K.family());
      k && same_exponent(k->exponent, l)) {
    add({"K.3", Verdict::holds, 0.0, "analytic", "r^-l K is constant"});
    add({"K'.2", Verdict::holds, 0.0, "analytic", "r^-l K is constant"});
    add({"K'.3", Verdict::holds, 0.0, "analytic", "r^-l K is constant"});
  } else {
    add(monotone_check(K, l));
    add(integral_check("K'.2", K, -l, +1));
    add(integral_check("K'.3", K, -l, -1));
  }

  // (f.1) lim r^d f = b >= 0 with 0 < d <= m+2
  const auto f_lead = f.at_zero();
  {
    HypothesisCheck h{"f.1", Verdict::not_decidable, std::nullopt, "analytic", ""};
    if (f.is_zero()) {
      h.verdict = Verdict::holds;
      h.witness = 0.0;
      h.detail = "f = 0, b = 0 for every d";
    } else if (f_lead) {
      const double d = -f_lead->exponent;
      h.witness = f_lead->coef;
      const bool ok = f_lead->coef >= 0.0 && d > 0.0 && d <= c.m + 2.0 + 1e-12;
      h.verdict = ok ? Verdict::holds : Verdict::fails;
      h.detail = "b=" + str(f_lead->coef) + ", d=" + str(d) +
                 ", m+2=" + str(c.m + 2.0);
    } else {
      h.detail = "leading term of f at 0 not available";
    }
    add(h);
  }

  // (f.2) f = O(r^-q) at infinity, q > n - m - lambda2
  {
    HypothesisCheck h{"f.2", Verdict::not_decidable, std::nullopt, "analytic", ""};
    const auto growth = f.growth_at_infinity();
    if (f.is_zero()) {
      h.verdict = Verdict::holds;
      h.detail = "f = 0";
    } else if (!growth) {
      h.detail = "f not defined near infinity";
    } else if (!c.lambda2) {
      h.witness = -*growth;
      h.detail = "lambda2 undefined (negative discriminant)";
    } else {
      const double q = -*growth;
      const double threshold = n - c.m - *c.lambda2;
      h.witness = q;
      h.verdict = q > threshold ? Verdict::holds : Verdict::fails;
      h.detail = "q=" + str(q) + " vs threshold " + str(threshold);
    }
    add(h);
  }

  // (f'.2), (f'.3)
  if (f.is_zero() || f.is_pure_power()) {
    add({"f'.2", Verdict::holds, 0.0, "analytic", "r^d f is constant"});
    add({"f'.3", Verdict::holds, 0.0, "analytic", "r^d f is constant"});
  } else if (f_lead) {
    const double d = -f_lead->exponent;
    add(integral_check("f'.2", f, d, +1));
    add(integral_check("f'.3", f, d, -1));
  } else {
    add({"f'.2", Verdict::not_decidable, std::nullopt, "numeric", "d unknown"});
    add({"f'.3", Verdict::not_decidable, std::nullopt, "numeric", "d unknown"});
  }
  return report;
}

}  // namespace slowdecay
