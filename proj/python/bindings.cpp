#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "slowdecay/cli/commands.hpp"
#include "slowdecay/cli/config.hpp"
#include "slowdecay/cli/verification.hpp"
#include "slowdecay/emden_fowler.hpp"
#include "slowdecay/instability.hpp"
#include "slowdecay/singular.hpp"

namespace py = pybind11;
using namespace slowdecay;
using slowdecay::cli::ExperimentConfig;
using slowdecay::cli::json;

namespace {

ExperimentConfig load(const std::string& text) {
  return ExperimentConfig::from_json(json::parse(text));
}

using Columns = std::vector<std::vector<double>>;

Columns columns(const std::vector<Sample>& s) {
  Columns c(3);
  for (const auto& x : s) {
    c[0].push_back(x.x);
    c[1].push_back(x.y);
    c[2].push_back(x.dy);
  }
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Radial and Emden-Fowler solvers for  Δu + K u^p + mu f = 0";

  static py::exception<Error> error(m, "SlowdecayError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      error((std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    }
  });

  m.def("validate_config", [](const std::string& cfg) {
    return load(cfg).resolved().dump();
  });

  m.def("run_command", [](const std::string& name, const std::string& cfg,
                          const std::string& out) {
    cli::Overrides flags;
    flags.out = out;
    std::ostringstream so, se;
    int code;
    try {
      code = cli::run_command(name, ExperimentConfig::from_json(json::parse(cfg), flags),
                              so, se);
    } catch (const Error& e) {
      cli::write_error(se, name, std::string(to_string(e.kind())), e.what());
      code = cli::exit_code(e.kind());
    }
    return py::make_tuple(code, so.str(), se.str());
  });

  m.def("verify_all", [](const std::string& cfg) {
    return cli::to_json(cli::verify_all(load(cfg))).dump();
  });

  m.def("regular_radial", [](const std::string& cfg, double alpha, double r_target) {
    const auto c = load(cfg);
    const ProblemParams P = c.problem();
    RadialOptions opt;
    opt.tol = c.tolerance();
    return columns(regular_radial(P, derive_constants(P), alpha, r_target, opt).samples());
  }, py::arg("config"), py::arg("alpha"), py::arg("r_target"));

  m.def("regular_ef", [](const std::string& cfg, double alpha, double t_min, double t_max) {
    const auto c = load(cfg);
    const ProblemParams P = c.problem();
    EFOptions opt;
    opt.tol = c.tolerance();
    return columns(regular_ef(P, derive_constants(P), alpha, t_min, t_max, opt).samples());
  }, py::arg("config"), py::arg("alpha"), py::arg("t_min"), py::arg("t_max"));

  m.def("singular_on_grid", [](const std::string& cfg) {
    const auto c = load(cfg);
    const ProblemParams P = c.problem();
    const DerivedConstants d = derive_constants(P);
    DirectOptions opt;
    opt.ef.tol = c.tolerance();
    opt.t_end = std::log(c.grid().hi);
    const auto grid = c.grid_points();
    return py::make_tuple(grid, ef_radial_values(d, construct_singular_direct(P, d, opt).trajectory, grid));
  });

  m.def("sweep_envelope", [](const std::string& cfg) {
    const auto c = load(cfg);
    const ProblemParams P = c.problem();
    SweepOptions opt;
    opt.tol = c.tolerance();
    const auto grid = c.grid_points();
    const SweepResult r = alpha_sweep(P, derive_constants(P), c.ladder(), grid, opt);
    return py::make_tuple(r.grid, r.envelope, r.monotonicity_violations);
  });

  m.def("linear_growth", [](double f, double g, double y0, double dy0, double horizon) {
    LinearOptions opt;
    opt.horizon = horizon;
    const GrowthReport r = integrate_linear({f, 0, 1}, {g, 0, 1}, y0, dy0, opt).report;
    py::dict d;
    d["slope"] = r.slope;
    d["predicted"] = r.predicted ? py::cast(*r.predicted) : py::none();
    d["crossings"] = [&] {
      py::list l;
      for (const auto& c : r.crossings)
        l.append(py::make_tuple(c.threshold, c.time ? py::cast(*c.time) : py::none()));
      return l;
    }();
    d["verdict"] = to_string(r.verdict);
    return d;
  }, py::arg("f"), py::arg("g"), py::arg("y0") = 1.0, py::arg("dy0") = 0.0,
     py::arg("horizon") = 5.0);
}
