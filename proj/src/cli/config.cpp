#include "slowdecay/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "slowdecay/error.hpp"
#include "slowdecay/radial.hpp"
#include "slowdecay/singular.hpp"

namespace slowdecay::cli {

namespace {

using Keys = std::set<std::string>;

[[noreturn]] void config_error(const std::string& msg) {
  fail(ErrorKind::ConfigError, msg);
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) config_error(path + " must be an object");
}

void check_keys(const json& j, const Keys& allowed, const std::string& path) {
  require_object(j, path);
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) config_error("unknown key " + path + "." + key);
}

double number(const json& j, const std::string& key, const std::string& path,
              std::optional<double> fallback = std::nullopt) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    config_error("missing " + path + "." + key);
  }
  const json& v = j.at(key);
  if (!v.is_number()) config_error(path + "." + key + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) config_error(path + "." + key + " must be finite");
  return x;
}

void check_numbers(const json& j, const std::string& path) {
  for (const auto& [key, value] : j.items())
    if (!value.is_number()) config_error(path + "." + key + " must be a number");
}

const Keys kProfileKeys[] = {
    {"family"},
    {"family", "coef", "exponent"},
    {"family", "coef", "exponent", "amplitude", "perturbation_exponent"},
    {"family", "coef", "exponent", "amplitude", "frequency"},
    {"family", "solution"},
};

void validate_profile(const json& j, const std::string& path) {
  require_object(j, path);
  if (!j.contains("family") || !j.at("family").is_string())
    config_error(path + ".family must be a string");
  const std::string fam = j.at("family");
  int idx;
  if (fam == "zero") idx = 0;
  else if (fam == "pure_power") idx = 1;
  else if (fam == "perturbed_power") idx = 2;
  else if (fam == "oscillatory") idx = 3;
  else if (fam == "manufactured") idx = 4;
  else config_error(path + ".family: unknown family '" + fam + "'");
  check_keys(j, kProfileKeys[idx], path);
  if (idx == 4) {
    const json& s = j.at("solution");
    require_object(s, path + ".solution");
    if (!s.contains("kind") || !s.at("kind").is_string())
      config_error(path + ".solution.kind must be a string");
    const std::string kind = s.at("kind");
    if (kind == "power")
      check_keys(s, {"kind", "coef", "rate"}, path + ".solution");
    else if (kind == "log")
      check_keys(s, {"kind", "coef", "scale"}, path + ".solution");
    else
      config_error(path + ".solution.kind must be 'power' or 'log'");
  } else {
    for (const auto& [key, value] : j.items())
      if (key != "family" && !value.is_number())
        config_error(path + "." + key + " must be a number");
  }
}

void validate_state(const json& j, const Keys& keys, const std::string& path) {
  check_keys(j, keys, path);
  for (const auto& k : keys)
    if (!j.contains(k)) config_error("missing " + path + "." + k);
  check_numbers(j, path);
}

void validate_coefficient(const json& j, const std::string& path) {
  check_keys(j, {"limit", "amplitude", "rate"}, path);
  check_numbers(j, path);
}

void validate(const json& doc) {
  check_keys(doc,
             {"description", "problem", "tolerance", "grid", "ladder", "sweep",
              "solve", "solve_ef", "singular", "classify", "rates", "energy",
              "instability", "output_dir", "seed"},
             "config");
  if (doc.contains("description") && !doc.at("description").is_string())
    config_error("config.description must be a string");
  if (!doc.contains("problem")) config_error("missing config.problem");
  const json& pr = doc.at("problem");
  check_keys(pr, {"n", "p", "l", "mu", "K", "f"}, "problem");
  for (const char* k : {"n", "p", "l", "mu"})
    if (pr.contains(k) && !pr.at(k).is_number())
      config_error(std::string("problem.") + k + " must be a number");
  if (pr.contains("K")) validate_profile(pr.at("K"), "problem.K");
  if (pr.contains("f")) validate_profile(pr.at("f"), "problem.f");

  if (doc.contains("tolerance")) {
    check_keys(doc.at("tolerance"), {"rel", "abs"}, "tolerance");
    check_numbers(doc.at("tolerance"), "tolerance");
  }
  if (doc.contains("grid")) {
    check_keys(doc.at("grid"), {"lo", "hi", "n"}, "grid");
    check_numbers(doc.at("grid"), "grid");
  }
  if (doc.contains("ladder")) {
    const json& l = doc.at("ladder");
    check_keys(l, {"max_exp", "alphas"}, "ladder");
    if (l.contains("max_exp") && l.contains("alphas"))
      config_error("ladder takes either max_exp or alphas, not both");
    if (l.contains("max_exp") && !l.at("max_exp").is_number_integer())
      config_error("ladder.max_exp must be an integer");
    if (l.contains("alphas")) {
      if (!l.at("alphas").is_array()) config_error("ladder.alphas must be an array");
      for (const auto& a : l.at("alphas"))
        if (!a.is_number()) config_error("ladder.alphas must hold numbers");
    }
  }
  if (doc.contains("sweep")) {
    const json& s = doc.at("sweep");
    check_keys(s, {"engine", "convergence_tol", "extrapolate"}, "sweep");
    if (s.contains("engine") &&
        (!s.at("engine").is_string() ||
         (s.at("engine") != "emden_fowler" && s.at("engine") != "radial")))
      config_error("sweep.engine must be 'emden_fowler' or 'radial'");
    if (s.contains("extrapolate") && !s.at("extrapolate").is_boolean())
      config_error("sweep.extrapolate must be a boolean");
    if (s.contains("convergence_tol") && !s.at("convergence_tol").is_number())
      config_error("sweep.convergence_tol must be a number");
  }
  if (doc.contains("solve")) {
    const json& s = doc.at("solve");
    check_keys(s, {"alpha", "r0", "r_target", "start", "samples"}, "solve");
    if (s.contains("start")) validate_state(s.at("start"), {"r", "u", "du"}, "solve.start");
    for (const char* k : {"alpha", "r0", "r_target", "samples"})
      if (s.contains(k) && !s.at(k).is_number())
        config_error(std::string("solve.") + k + " must be a number");
  }
  if (doc.contains("solve_ef")) {
    const json& s = doc.at("solve_ef");
    check_keys(s, {"alpha", "t_min", "t_max", "start", "samples"}, "solve_ef");
    if (s.contains("start"))
      validate_state(s.at("start"), {"t", "v", "dv"}, "solve_ef.start");
    for (const char* k : {"alpha", "t_min", "t_max", "samples"})
      if (s.contains(k) && !s.at(k).is_number())
        config_error(std::string("solve_ef.") + k + " must be a number");
  }
  if (doc.contains("singular")) {
    check_keys(doc.at("singular"), {"t_start", "t_end", "perturbation"}, "singular");
    check_numbers(doc.at("singular"), "singular");
  }
  if (doc.contains("classify")) {
    const json& s = doc.at("classify");
    check_keys(s, {"source", "alpha", "t_min", "t_max", "v0"}, "classify");
    if (s.contains("source") &&
        (!s.at("source").is_string() ||
         (s.at("source") != "regular" && s.at("source") != "direct" &&
          s.at("source") != "equilibrium")))
      config_error("classify.source must be 'regular', 'direct' or 'equilibrium'");
    for (const char* k : {"alpha", "t_min", "t_max", "v0"})
      if (s.contains(k) && !s.at(k).is_number())
        config_error(std::string("classify.") + k + " must be a number");
  }
  if (doc.contains("rates")) {
    const json& s = doc.at("rates");
    check_keys(s, {"u_star", "r0", "r1", "alpha", "window"}, "rates");
    if (s.contains("u_star")) {
      json wrapped{{"family", "manufactured"}, {"solution", s.at("u_star")}};
      validate_profile(wrapped, "rates.u_star");
    }
    if (s.contains("window")) {
      check_keys(s.at("window"), {"lo", "hi", "points"}, "rates.window");
      check_numbers(s.at("window"), "rates.window");
    }
    for (const char* k : {"r0", "r1", "alpha"})
      if (s.contains(k) && !s.at(k).is_number())
        config_error(std::string("rates.") + k + " must be a number");
  }
  if (doc.contains("energy")) {
    const json& s = doc.at("energy");
    check_keys(s, {"source", "alpha", "t_min", "t_max", "b", "slack"}, "energy");
    if (s.contains("source") &&
        (!s.at("source").is_string() ||
         (s.at("source") != "regular" && s.at("source") != "direct")))
      config_error("energy.source must be 'regular' or 'direct'");
    for (const char* k : {"alpha", "t_min", "t_max", "b", "slack"})
      if (s.contains(k) && !s.at(k).is_number())
        config_error(std::string("energy.") + k + " must be a number");
  }
  if (doc.contains("instability")) {
    const json& s = doc.at("instability");
    check_keys(s, {"f", "g", "y0", "dy0", "horizon", "t0"}, "instability");
    if (s.contains("f")) validate_coefficient(s.at("f"), "instability.f");
    if (s.contains("g")) validate_coefficient(s.at("g"), "instability.g");
    for (const char* k : {"y0", "dy0", "horizon", "t0"})
      if (s.contains(k) && !s.at(k).is_number())
        config_error(std::string("instability.") + k + " must be a number");
  }
  if (doc.contains("output_dir") && !doc.at("output_dir").is_string())
    config_error("output_dir must be a string");
  if (doc.contains("seed") && !doc.at("seed").is_number_unsigned())
    config_error("seed must be a nonnegative integer");
}

}  // namespace

CoefficientProfile profile_from_json(const json& j, double n, double p,
                                     const CoefficientProfile* K) {
  validate_profile(j, "profile");
  const std::string fam = j.at("family");
  const std::string path = "profile";
  if (fam == "zero") return CoefficientProfile::zero();
  if (fam == "pure_power")
    return CoefficientProfile::pure_power(number(j, "coef", path, 1.0),
                                          number(j, "exponent", path, 0.0));
  if (fam == "perturbed_power")
    return CoefficientProfile::perturbed_power(
        number(j, "coef", path, 1.0), number(j, "exponent", path, 0.0),
        number(j, "amplitude", path, 0.0),
        number(j, "perturbation_exponent", path, 1.0));
  if (fam == "oscillatory")
    return CoefficientProfile::oscillatory(
        number(j, "coef", path, 1.0), number(j, "exponent", path, 0.0),
        number(j, "amplitude", path, 0.0), number(j, "frequency", path, 1.0));
  // manufactured
  if (!K) config_error("a manufactured profile is only allowed for f");
  const json& s = j.at("solution");
  const std::string kind = s.at("kind");
  const ReferenceSolution u =
      kind == "power"
          ? ReferenceSolution::power(number(s, "coef", "solution", 1.0),
                                     number(s, "rate", "solution", 0.5))
          : ReferenceSolution::logarithmic(number(s, "coef", "solution", 1.0),
                                           number(s, "scale", "solution", 1.0));
  return CoefficientProfile::manufactured(u, n, p, *K);
}

ExperimentConfig ExperimentConfig::from_json(const json& doc,
                                             const Overrides& flags) {
  validate(doc);
  ExperimentConfig cfg;
  cfg.doc_ = doc;
  const json& pr = doc.at("problem");
  const double n = number(pr, "n", "problem", 15.0);
  if (!flags.allow_fractional_n && n != std::round(n))
    config_error("problem.n must be an integer (use --allow-fractional-n)");

  if (doc.contains("tolerance")) {
    cfg.tol_.rel = number(doc.at("tolerance"), "rel", "tolerance", cfg.tol_.rel);
    cfg.tol_.abs = number(doc.at("tolerance"), "abs", "tolerance", cfg.tol_.abs);
  }
  if (flags.tol_rel) cfg.tol_.rel = *flags.tol_rel;
  if (flags.tol_abs) cfg.tol_.abs = *flags.tol_abs;
  if (!(cfg.tol_.rel >= 1e-13) || !(cfg.tol_.abs > 0.0))
    config_error("tolerance needs rel >= 1e-13 and abs > 0");

  if (doc.contains("grid")) {
    const json& g = doc.at("grid");
    cfg.grid_.lo = number(g, "lo", "grid", cfg.grid_.lo);
    cfg.grid_.hi = number(g, "hi", "grid", cfg.grid_.hi);
    const double gn = number(g, "n", "grid", double(cfg.grid_.n));
    if (gn != std::round(gn) || gn < 2) config_error("grid.n must be an integer >= 2");
    cfg.grid_.n = static_cast<std::size_t>(gn);
  }
  if (flags.grid_lo) cfg.grid_.lo = *flags.grid_lo;
  if (flags.grid_hi) cfg.grid_.hi = *flags.grid_hi;
  if (flags.grid_n) cfg.grid_.n = *flags.grid_n;
  if (!(cfg.grid_.lo > 0.0) || !(cfg.grid_.hi > cfg.grid_.lo) || cfg.grid_.n < 2)
    config_error("grid needs 0 < lo < hi and n >= 2");

  int max_exp = 14;
  bool explicit_alphas = false;
  if (doc.contains("ladder")) {
    const json& l = doc.at("ladder");
    if (l.contains("max_exp")) max_exp = l.at("max_exp").get<int>();
    if (l.contains("alphas")) {
      explicit_alphas = true;
      for (const auto& a : l.at("alphas")) cfg.ladder_.push_back(a.get<double>());
    }
  }
  if (flags.ladder_max_exp) {
    max_exp = *flags.ladder_max_exp;
    explicit_alphas = false;
    cfg.ladder_.clear();
  }
  if (!explicit_alphas) {
    if (max_exp < 0) config_error("ladder.max_exp must be >= 0");
    cfg.ladder_ = geometric_ladder(max_exp);
  }
  if (cfg.ladder_.empty()) config_error("empty alpha ladder");
  for (std::size_t i = 0; i < cfg.ladder_.size(); ++i) {
    if (!(cfg.ladder_[i] > 0.0)) config_error("ladder alphas must be positive");
    if (i > 0 && !(cfg.ladder_[i] > cfg.ladder_[i - 1]))
      config_error("ladder alphas must be strictly ascending");
  }

  if (doc.contains("output_dir")) cfg.output_dir_ = doc.at("output_dir");
  if (flags.out) cfg.output_dir_ = *flags.out;
  if (doc.contains("seed")) cfg.seed_ = doc.at("seed").get<unsigned>();

  // build once so that invalid parameters surface as configuration errors
  try {
    (void)cfg.problem();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigError) throw;
    config_error(std::string("problem: ") + e.what());
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path,
                                             const Overrides& flags) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    config_error("config is not valid JSON: " + std::string(e.what()));
  }
  return from_json(doc, flags);
}

ProblemParams ExperimentConfig::problem() const {
  const json& pr = doc_.at("problem");
  const double n = number(pr, "n", "problem", 15.0);
  const double p = number(pr, "p", "problem", 3.0);
  const double l = number(pr, "l", "problem", 0.0);
  const double mu = number(pr, "mu", "problem", 0.0);
  const json K_spec = pr.value("K", json{{"family", "pure_power"}, {"coef", 1.0}, {"exponent", l}});
  const json f_spec = pr.value("f", json{{"family", "zero"}});
  CoefficientProfile K = profile_from_json(K_spec, n, p, nullptr);
  CoefficientProfile f = profile_from_json(f_spec, n, p, &K);
  return ProblemParams(n, p, l, mu, K, f);
}

std::vector<double> ExperimentConfig::grid_points() const {
  return log_grid(grid_.lo, grid_.hi, grid_.n);
}

const json& ExperimentConfig::section(const std::string& name) const {
  static const json empty = json::object();
  return doc_.contains(name) ? doc_.at(name) : empty;
}

json ExperimentConfig::resolved() const {
  json r = doc_;
  r["tolerance"] = {{"rel", tol_.rel}, {"abs", tol_.abs}};
  r["grid"] = {{"lo", grid_.lo}, {"hi", grid_.hi}, {"n", grid_.n}};
  r["ladder"] = {{"alphas", ladder_}};
  r["output_dir"] = output_dir_;
  r["seed"] = seed_;
  return r;
}

}  // namespace slowdecay::cli
