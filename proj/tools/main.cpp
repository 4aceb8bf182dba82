#include <iostream>

#include <CLI11.hpp>

#include "slowdecay/cli/commands.hpp"
#include "slowdecay/cli/config.hpp"

using namespace slowdecay;
using namespace slowdecay::cli;

int main(int argc, char** argv) {
  CLI::App app{"Radial solutions of  Δu + K(|x|) u^p + mu f(|x|) = 0"};
  app.require_subcommand(1, 1);

  std::string config_path;
  Overrides flags;
  for (const auto& name : command_names()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment JSON");
    sub->add_option("--out", flags.out, "output directory");
    sub->add_option("--tol-rel", flags.tol_rel, "relative integration tolerance");
    sub->add_option("--tol-abs", flags.tol_abs, "absolute integration tolerance");
    sub->add_option("--grid-lo", flags.grid_lo, "smallest radius of the output grid");
    sub->add_option("--grid-hi", flags.grid_hi, "largest radius of the output grid");
    sub->add_option("--grid-n", flags.grid_n, "number of grid points");
    sub->add_option("--ladder-max-exp", flags.ladder_max_exp, "alpha ladder 2^0..2^k");
    sub->add_flag("--allow-fractional-n", flags.allow_fractional_n,
                  "accept non-integer dimensions");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    write_error(std::cerr, "", "ConfigError", e.what());
    return kConfigFailure;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  std::optional<ExperimentConfig> cfg;
  try {
    cfg = config_path.empty()
              ? ExperimentConfig::from_json(json{{"problem", json::object()}}, flags)
              : ExperimentConfig::from_file(config_path, flags);
  } catch (const Error& e) {
    write_error(std::cerr, command, std::string(to_string(e.kind())), e.what());
    return exit_code(e.kind());
  }
  return run_command(command, *cfg, std::cout, std::cerr, config_path);
}
