#include "slowdecay/cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>

#include "slowdecay/asymptotics.hpp"
#include "slowdecay/cli/verification.hpp"
#include "slowdecay/instability.hpp"
#include "slowdecay/singular.hpp"

namespace slowdecay::cli {

namespace fs = std::filesystem;

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {
      "constants", "check-hypotheses", "solve",  "solve-ef",
      "sweep",     "singular",         "classify", "rates",
      "energy",    "instability",      "verify-all"};
  return names;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ConfigError:
    case ErrorKind::InvalidParameters:
      return kConfigFailure;
    default:
      return kNumericalFailure;
  }
}

void write_error(std::ostream& err, const std::string& command,
                 const std::string& kind, const std::string& message) {
  err << json{{"command", command}, {"error", kind}, {"message", message}}.dump()
      << '\n';
}

namespace {

// ---------------------------------------------------------------------------
// output helpers

json num(double x) { return std::isfinite(x) ? json(x) : json(); }
json num(const std::optional<double>& x) { return x ? num(*x) : json(); }

std::string stem(const std::string& command) {
  std::string s = command;
  for (auto& ch : s)
    if (ch == '-') ch = '_';
  return s;
}

void write_text(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::ConfigError, "cannot write " + path.string());
  f << text;
}

void write_json(const fs::path& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

void write_csv(const fs::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::string text;
  for (std::size_t i = 0; i < header.size(); ++i)
    text += (i ? "," : "") + header[i];
  text += '\n';
  char buf[32];
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      if (i) text += ',';
      text += buf;
    }
    text += '\n';
  }
  write_text(path, text);
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

double get(const json& sec, const char* key, double fallback) {
  return sec.contains(key) ? sec.at(key).get<double>() : fallback;
}

// ---------------------------------------------------------------------------
// library types to JSON

json constants_json(const ProblemParams& P, const DerivedConstants& c) {
  json roots;
  if (c.roots) roots = {{"z1", c.roots->z1}, {"z2", c.roots->z2}};
  return {{"n", P.n()},
          {"p", P.p()},
          {"l", P.l()},
          {"mu", P.mu()},
          {"m", c.m},
          {"L", c.L},
          {"Lp1", c.Lp1},
          {"a", c.a},
          {"lambda2", num(c.lambda2)},
          {"p_c", c.p_c.finite ? json(*c.p_c.finite) : json("inf")},
          {"p_exceeds_p_c", c.p_c.exceeded_by(P.p())},
          {"k0", num(c.k0)},
          {"regime", to_string(c.regime)},
          {"d", c.d},
          {"b", c.b},
          {"b_max", num(c.b_max)},
          {"roots", roots}};
}

json trajectory_json(const Trajectory& tr) {
  return {{"coordinates", to_string(tr.coordinates())},
          {"direction", to_string(tr.direction())},
          {"termination",
           {{"kind", to_string(tr.termination().kind)}, {"at", tr.termination().at}}},
          {"lo", tr.lo()},
          {"hi", tr.hi()},
          {"samples", tr.samples().size()},
          {"accepted", tr.stats().accepted},
          {"rejected", tr.stats().rejected},
          {"rhs_evaluations", tr.stats().rhs_evaluations}};
}

json classification_json(const ClassificationReport& r) {
  return {{"class", to_string(r.limit_class)},
          {"estimate", r.estimate},
          {"dv_tail", r.dv_tail},
          {"oscillation", r.oscillation},
          {"tolerance", r.tolerance},
          {"window", {r.window_lo, r.window_hi}},
          {"v_prime_vanishes", r.v_prime_vanishes},
          {"admissible_b", r.admissible_b},
          {"b", r.b},
          {"b_max", num(r.b_max)},
          {"a", r.a},
          {"b0", r.b0},
          {"detail", r.detail}};
}

json rate_json(const RateFit& f) {
  return {{"class", to_string(f.rate_class)},
          {"exponent", f.exponent},
          {"intercept", f.intercept},
          {"residual", f.residual},
          {"expected", f.expected},
          {"window", {{"lo", f.window.lo}, {"hi", f.window.hi}, {"points", f.window.points}}}};
}

json linearization_json(const Linearization& z) {
  return {{"re1", z.re1}, {"im1", z.im1}, {"re2", z.re2}, {"im2", z.im2}, {"real", z.real}};
}

/// 0 keeps the integrator's own sample points, otherwise n dense points
/// spaced uniformly in x (log-spaced for radial trajectories).
std::vector<Sample> output_samples(const Trajectory& tr, std::size_t n) {
  if (n == 0) {
    auto s = tr.samples();
    if (tr.direction() == Direction::decreasing) std::reverse(s.begin(), s.end());
    return s;
  }
  std::vector<double> xs;
  if (tr.coordinates() == Coordinates::radial) {
    xs = log_grid(tr.lo(), tr.hi(), n);
  } else {
    for (std::size_t i = 0; i < n; ++i)
      xs.push_back(n == 1 ? tr.lo() : tr.lo() + (tr.hi() - tr.lo()) * double(i) / double(n - 1));
  }
  xs.front() = tr.lo();
  xs.back() = tr.hi();
  return tr.at(xs);
}

std::size_t samples_option(const json& sec) {
  const double n = get(sec, "samples", 0.0);
  if (n < 0 || n != std::round(n) || n == 1)
    fail(ErrorKind::ConfigError, "samples must be 0 or an integer >= 2");
  return static_cast<std::size_t>(n);
}

/// Exit status for a trajectory-producing command.
int trajectory_status(const Trajectory& tr) {
  const auto k = tr.termination().kind;
  return k == Termination::Kind::step_underflow || k == Termination::Kind::max_steps
             ? kNumericalFailure
             : kSuccess;
}

struct Context {
  const ExperimentConfig& cfg;
  ProblemParams P;
  DerivedConstants c;
  fs::path out;
  std::ostream& stdout_;
  RadialOptions ropt;
  EFOptions eopt;
  std::vector<std::string> files;

  void emit_json(const std::string& name, const json& j) {
    write_json(out / name, j);
    files.push_back(name);
  }
  void emit_csv(const std::string& name, const std::vector<std::string>& header,
                const std::vector<std::vector<double>>& rows) {
    write_csv(out / name, header, rows);
    files.push_back(name);
  }
};

struct Outcome {
  json report;
  int status = kSuccess;
};

// ---------------------------------------------------------------------------
// commands

Outcome cmd_constants(Context& x) { return {constants_json(x.P, x.c)}; }

Outcome cmd_hypotheses(Context& x) {
  const HypothesisReport h = check_hypotheses(x.P);
  json checks = json::array();
  bool any_fail = false;
  for (const auto& k : h.checks) {
    checks.push_back({{"name", k.name},
                      {"verdict", to_string(k.verdict)},
                      {"witness", num(k.witness)},
                      {"method", k.method},
                      {"detail", k.detail}});
    any_fail |= k.verdict == Verdict::fails;
  }
  return {{{"checks", checks}, {"all_hold_or_undecidable", !any_fail}},
          any_fail ? kVerificationFailure : kSuccess};
}

Outcome cmd_solve(Context& x) {
  const json& sec = x.cfg.section("solve");
  const double r_target = get(sec, "r_target", x.cfg.grid().hi);
  std::optional<double> alpha;
  RadialState start;
  if (sec.contains("start")) {
    const json& s = sec.at("start");
    start = {s.at("r").get<double>(), s.at("u").get<double>(), s.at("du").get<double>()};
  } else {
    alpha = get(sec, "alpha", 1.0);
    start = series_start(x.P, x.c, *alpha, get(sec, "r0", 1e-6));
  }
  const Trajectory tr = integrate_radial(x.P, start, r_target, x.ropt);
  const Sample last = tr.at(tr.direction() == Direction::increasing ? tr.hi() : tr.lo());

  std::vector<std::vector<double>> rows;
  for (const auto& s : output_samples(tr, samples_option(sec))) rows.push_back({s.x, s.y, s.dy});
  x.emit_csv("solve.csv", {"r", "u", "du"}, rows);

  json residual;
  if (tr.reached_target() && r_target > start.r) {
    const IntegralResidual ir = integral_residual(x.P, tr, r_target);
    residual = {{"max_abs", ir.max_abs}, {"max_rel", ir.max_rel}, {"at", ir.at}};
  }
  return {{{"alpha", num(alpha)},
           {"start", {{"r", start.r}, {"u", start.u}, {"du", start.du}}},
           {"r_target", r_target},
           {"trajectory", trajectory_json(tr)},
           {"final", {{"r", last.x}, {"u", last.y}, {"du", last.dy}}},
           {"integral_residual", residual}},
          trajectory_status(tr)};
}

Outcome cmd_solve_ef(Context& x) {
  const json& sec = x.cfg.section("solve_ef");
  const double t_max = get(sec, "t_max", std::log(x.cfg.grid().hi));
  std::optional<double> alpha;
  std::optional<Trajectory> tr;
  EFState start;
  if (sec.contains("start")) {
    const json& s = sec.at("start");
    start = {s.at("t").get<double>(), s.at("v").get<double>(), s.at("dv").get<double>()};
    tr = integrate_ef(x.P, x.c, start, t_max, x.eopt);
  } else {
    alpha = get(sec, "alpha", 1.0);
    tr = regular_ef(x.P, x.c, *alpha, get(sec, "t_min", -14.0), t_max, x.eopt);
    const Sample s0 = tr->samples().front();
    start = {s0.x, s0.y, s0.dy};
  }
  const double b = x.c.b;
  std::vector<std::vector<double>> rows;
  for (const auto& s : output_samples(*tr, samples_option(sec)))
    rows.push_back({s.x, s.y, s.dy, energy(x.P, x.c, {s.x, s.y, s.dy}, b)});
  x.emit_csv("solve_ef.csv", {"t", "v", "dv", "E"}, rows);
  const Sample last = tr->at(tr->direction() == Direction::increasing ? tr->hi() : tr->lo());
  return {{{"alpha", num(alpha)},
           {"start", {{"t", start.t}, {"v", start.v}, {"dv", start.dv}}},
           {"t_max", t_max},
           {"b", b},
           {"trajectory", trajectory_json(*tr)},
           {"final", {{"t", last.x}, {"v", last.y}, {"dv", last.dy}}}},
          trajectory_status(*tr)};
}

Outcome cmd_sweep(Context& x) {
  const json& sec = x.cfg.section("sweep");
  SweepOptions opt;
  opt.tol = x.cfg.tolerance();
  opt.engine = sec.value("engine", std::string("emden_fowler")) == "radial"
                   ? SweepEngine::radial
                   : SweepEngine::emden_fowler;
  opt.convergence_tol = get(sec, "convergence_tol", opt.convergence_tol);
  opt.extrapolate = sec.value("extrapolate", false);
  const auto grid = x.cfg.grid_points();
  const SweepResult r = alpha_sweep(x.P, x.c, x.cfg.ladder(), grid, opt);

  json levels = json::array();
  double worst_ratio = 0.0;
  for (std::size_t i = 0; i < r.alphas.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "sweep/alpha_%02zu.csv", i);
    std::vector<std::vector<double>> rows;
    for (std::size_t j = 0; j < grid.size(); ++j) rows.push_back({grid[j], r.values[i][j]});
    x.emit_csv(name, {"r", "u"}, rows);
    const BoundCheck bc = verify_bound(x.P, x.c, grid, r.values[i]);
    worst_ratio = std::max(worst_ratio, bc.max_ratio);
    levels.push_back({{"alpha", r.alphas[i]}, {"file", name}, {"max_bound_ratio", bc.max_ratio}});
  }
  std::vector<std::vector<double>> rows;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    rows.push_back({grid[j], r.envelope[j]});
    if (r.extrapolated) rows.back().push_back((*r.extrapolated)[j]);
  }
  std::vector<std::string> header = {"r", "U"};
  if (r.extrapolated) header.push_back("U_extrapolated");
  x.emit_csv("sweep/envelope.csv", header, rows);

  json excluded = json::array();
  for (const auto& e : r.excluded)
    excluded.push_back({{"alpha", e.alpha}, {"reason", e.reason}, {"lost_at", num(e.lost_at)}});
  const BoundCheck env = verify_bound(x.P, x.c, grid, r.envelope);
  return {{{"engine", to_string(opt.engine)},
           {"levels", levels},
           {"excluded", excluded},
           {"monotonicity_violations", r.monotonicity_violations},
           {"gaps", r.gaps},
           {"sup_gap", num(r.sup_gap)},
           {"converged", r.converged},
           {"smallest_admissible_alpha", num(r.smallest_admissible_alpha)},
           {"envelope_class", to_string(r.envelope_class)},
           {"bound", {{"levels_max_ratio", worst_ratio},
                      {"envelope_max_ratio", env.max_ratio},
                      {"envelope_at", env.at},
                      {"holds", worst_ratio < 1.0}}}}};
}

DirectConstruction direct_from(Context& x) {
  const json& sec = x.cfg.section("singular");
  DirectOptions opt;
  opt.t_start = get(sec, "t_start", opt.t_start);
  opt.t_end = get(sec, "t_end", std::log(x.cfg.grid().hi));
  opt.perturbation = get(sec, "perturbation", opt.perturbation);
  opt.ef = x.eopt;
  return construct_singular_direct(x.P, x.c, opt);
}

Outcome cmd_singular(Context& x) {
  const DirectConstruction d = direct_from(x);
  const auto grid = x.cfg.grid_points();
  std::vector<std::vector<double>> rows;
  for (double r : grid) {
    const Sample s = d.trajectory.at(std::log(r));
    const RadialState u = from_ef(x.c, {s.x, s.y, s.dy});
    rows.push_back({r, u.u, u.du});
  }
  x.emit_csv("singular.csv", {"r", "u", "du"}, rows);

  json closed;
  try {
    const ClosedFormSingular U = closed_form_singular(x.P, x.c);
    double dev = 0.0;
    for (const auto& row : rows) dev = std::max(dev, std::abs(row[1] / U.value(row[0]) - 1.0));
    closed = {{"coef", U.coef},
              {"exponent", U.exponent},
              {"substitution_residual", closed_form_residual(x.P, U, 100, x.cfg.seed())},
              {"max_rel_deviation", dev}};
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotApplicable) throw;
  }
  json cls;
  try {
    cls = classification_json(classify_origin_limit(x.P, x.c, d.trajectory));
  } catch (const Error& e) {
    cls = {{"error", std::string(to_string(e.kind()))}, {"message", e.what()}};
  }
  return {{{"seed_root", d.seed_root},
           {"sign", d.sign},
           {"mode", d.mode},
           {"linearization", linearization_json(d.linearization)},
           {"max_bound_ratio", d.max_bound_ratio},
           {"trajectory", trajectory_json(d.trajectory)},
           {"classification", cls},
           {"closed_form", closed}}};
}

Outcome cmd_classify(Context& x) {
  const json& sec = x.cfg.section("classify");
  const std::string source = sec.value("source", std::string("regular"));
  std::optional<Trajectory> tr;
  json input = {{"source", source}};
  if (source == "regular") {
    const double alpha = get(sec, "alpha", 1.0);
    tr = regular_ef(x.P, x.c, alpha, get(sec, "t_min", -14.0), get(sec, "t_max", 0.0), x.eopt);
    input["alpha"] = alpha;
  } else if (source == "direct") {
    tr = direct_from(x).trajectory;
  } else {
    double v0;
    if (sec.contains("v0")) {
      v0 = sec.at("v0").get<double>();
    } else if (x.c.k0) {
      v0 = x.c.regime == ForcingRegime::critical
               ? limit_equation_roots(*x.c.k0, x.P.p(), x.c.Lp1, x.c.b).z2
               : unforced_root(*x.c.k0, x.P.p(), x.c.Lp1);
    } else {
      fail(ErrorKind::ConfigError, "classify.v0 is required when K has no k0 r^l lead");
    }
    tr = integrate_ef(x.P, x.c, {get(sec, "t_min", -20.0), v0, 0.0}, get(sec, "t_max", 0.0),
                      x.eopt);
    input["v0"] = v0;
  }
  const ClassificationReport r = classify_origin_limit(x.P, x.c, *tr);
  return {{{"input", input},
           {"trajectory", trajectory_json(*tr)},
           {"classification", classification_json(r)},
           {"v_prime_at_minus_12", tr->covers(-12.0) ? num(std::abs(tr->at(-12.0).dy)) : json()}}};
}

Outcome cmd_rates(Context& x) {
  const json& sec = x.cfg.section("rates");
  FitWindow window;
  if (sec.contains("window")) {
    const json& w = sec.at("window");
    window.lo = get(w, "lo", window.lo);
    window.hi = get(w, "hi", window.hi);
    window.points = static_cast<std::size_t>(get(w, "points", double(window.points)));
  }
  const double r1 = get(sec, "r1", 1.0);
  json report;
  std::optional<Trajectory> tr;
  if (sec.contains("u_star")) {
    const CoefficientProfile f = profile_from_json(
        {{"family", "manufactured"}, {"solution", sec.at("u_star")}}, x.P.n(), x.P.p(), &x.P.K());
    const auto& mf_family = std::get<family::Manufactured>(f.family());
    const ReferenceSolution& u = mf_family.solution;
    const ManufacturedForcing mf = manufactured_forcing(x.P.n(), x.P.p(), x.P.K(), u);
    const ProblemParams M(x.P.n(), x.P.p(), x.P.l(), 1.0, x.P.K(), mf.f);
    const DerivedConstants cm = derive_constants(M);
    const double r0 = get(sec, "r0",
                          std::holds_alternative<LogSolution>(u.spec()) ? 1e-7 : 1e-6);
    tr = integrate_radial(M, {r0, u.value(r0), u.d1(r0)}, r1, x.ropt);
    double dev = 0.0;
    for (const auto& s : tr->samples()) dev = std::max(dev, std::abs(s.y / u.value(s.x) - 1.0));
    report["manufactured"] = {{"zero_forcing", mf.zero_forcing},
                              {"positive_up_to", num(mf.positive_up_to)},
                              {"b", num(mf.b)},
                              {"d", num(mf.d)},
                              {"roundtrip_max_rel", dev}};
    if (!mf.d) fail(ErrorKind::NotApplicable, "manufactured forcing has no power lead at 0");
    report["fit"] = rate_json(fit_rate(cm, *tr, *mf.d, window));
  } else {
    if (x.c.regime == ForcingRegime::none)
      fail(ErrorKind::NotApplicable, "rates needs a forced problem or rates.u_star");
    const double alpha = get(sec, "alpha", 1.0);
    tr = regular_radial(x.P, x.c, alpha, r1, x.ropt, get(sec, "r0", 1e-6));
    report["alpha"] = alpha;
    report["fit"] = rate_json(fit_rate(x.c, *tr, x.c.d, window));
  }
  std::vector<std::vector<double>> rows;
  for (const auto& s : output_samples(*tr, 0)) rows.push_back({s.x, s.y});
  x.emit_csv("rates.csv", {"r", "u"}, rows);
  report["trajectory"] = trajectory_json(*tr);
  return {report, trajectory_status(*tr)};
}

Outcome cmd_energy(Context& x) {
  const json& sec = x.cfg.section("energy");
  const std::string source = sec.value("source", std::string("regular"));
  std::optional<Trajectory> tr;
  if (source == "regular")
    tr = regular_ef(x.P, x.c, get(sec, "alpha", 1.0), get(sec, "t_min", -14.0),
                    get(sec, "t_max", 0.0), x.eopt);
  else
    tr = direct_from(x).trajectory;
  const double b = get(sec, "b", x.c.b);
  const EnergyTrace e = energy_trace(x.P, x.c, *tr, b, get(sec, "slack", 1e-8));
  std::vector<std::vector<double>> rows;
  double mismatch = 0.0;
  for (std::size_t i = 0; i < e.t.size(); ++i) {
    rows.push_back({e.t[i], e.E[i], e.residual[i], e.dissipation[i]});
    mismatch = std::max(mismatch, std::abs(e.E[i] - e.E.back() - e.dissipation[i]));
  }
  x.emit_csv("energy.csv", {"t", "E", "residual", "dissipation"}, rows);
  return {{{"source", source},
           {"b", b},
           {"a", x.c.a},
           {"max_residual", e.max_residual},
           {"monotonicity_violations", e.monotonicity_violations},
           {"monotone_claimed", e.monotone_claimed},
           {"E_first", e.E.front()},
           {"E_last", e.E.back()},
           {"dissipation_total", e.dissipation.front()},
           {"drop_vs_dissipation", mismatch},
           {"trajectory", trajectory_json(*tr)}}};
}

Outcome cmd_instability(Context& x) {
  const json& sec = x.cfg.section("instability");
  const auto coef = [&](const char* key, double limit) {
    ConvergingCoefficient k{limit, 0.0, 1.0};
    if (sec.contains(key)) {
      const json& j = sec.at(key);
      k.limit = get(j, "limit", k.limit);
      k.amplitude = get(j, "amplitude", k.amplitude);
      k.rate = get(j, "rate", k.rate);
    }
    return k;
  };
  LinearOptions opt;
  opt.tol = x.cfg.tolerance();
  opt.t0 = get(sec, "t0", 0.0);
  opt.horizon = get(sec, "horizon", opt.horizon);
  const ConvergingCoefficient f = coef("f", 11.0), g = coef("g", 1.0);
  const LinearRun run = integrate_linear(f, g, get(sec, "y0", 1.0), get(sec, "dy0", 0.0), opt);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < run.pieces.size(); ++i)
    for (const auto& s : run.pieces[i].samples()) {
      if (!rows.empty() && s.x <= rows.back()[0]) continue;
      rows.push_back({s.x, std::log(std::abs(s.y)) + run.log_scale[i]});
    }
  x.emit_csv("instability.csv", {"t", "log_abs_y"}, rows);
  const GrowthReport& r = run.report;
  json crossings = json::array();
  for (const auto& c : r.crossings)
    crossings.push_back({{"threshold", c.threshold}, {"time", num(c.time)}});
  return {{{"f", {{"limit", f.limit}, {"amplitude", f.amplitude}, {"rate", f.rate}}},
           {"g", {{"limit", g.limit}, {"amplitude", g.amplitude}, {"rate", g.rate}}},
           {"crossings", crossings},
           {"slope", r.slope},
           {"predicted", num(r.predicted)},
           {"complex_roots", r.complex_roots},
           {"verdict", to_string(r.verdict)},
           {"log_abs_final", r.log_abs_final},
           {"renormalizations", run.pieces.size() - 1},
           {"diagnostic", r.diagnostic}}};
}

Outcome cmd_verify_all(Context& x) {
  const VerificationReport v = verify_all(x.cfg);
  x.stdout_ << summary_table(v);
  return {to_json(v), v.all_pass() ? kSuccess : kVerificationFailure};
}

}  // namespace

int run_command(const std::string& name, const ExperimentConfig& cfg,
                std::ostream& out, std::ostream& err,
                const std::string& config_path) {
  static const std::map<std::string, std::function<Outcome(Context&)>> table = {
      {"constants", cmd_constants},   {"check-hypotheses", cmd_hypotheses},
      {"solve", cmd_solve},           {"solve-ef", cmd_solve_ef},
      {"sweep", cmd_sweep},           {"singular", cmd_singular},
      {"classify", cmd_classify},     {"rates", cmd_rates},
      {"energy", cmd_energy},         {"instability", cmd_instability},
      {"verify-all", cmd_verify_all}};
  const auto it = table.find(name);
  if (it == table.end()) {
    write_error(err, name, "ConfigError", "unknown command '" + name + "'");
    return kConfigFailure;
  }
  const std::string started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  try {
    Context x{cfg, cfg.problem(), {}, cfg.output_dir(), out, {}, {}, {}};
    x.c = derive_constants(x.P);
    x.ropt.tol = cfg.tolerance();
    x.eopt.tol = cfg.tolerance();
    Outcome o = it->second(x);
    const std::string file = stem(name) + ".json";
    x.emit_json(file, o.report);
    if (name != "verify-all") out << o.report.dump(2) << '\n';
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_json(x.out / (stem(name) + ".meta.json"),
               {{"command", name},
                {"version", "0.1.0"},
                {"config_path", config_path},
                {"config", cfg.resolved()},
                {"started", started},
                {"finished", utc_now()},
                {"elapsed_seconds", elapsed},
                {"exit_code", o.status},
                {"files", x.files}});
    return o.status;
  } catch (const Error& e) {
    write_error(err, name, std::string(to_string(e.kind())), e.what());
    return exit_code(e.kind());
  } catch (const json::exception& e) {
    write_error(err, name, "ConfigError", e.what());
    return kConfigFailure;
  } catch (const fs::filesystem_error& e) {
    write_error(err, name, "ConfigError", e.what());
    return kConfigFailure;
  }
}

}  // namespace slowdecay::cli
