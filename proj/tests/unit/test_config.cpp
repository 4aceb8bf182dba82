#include <doctest.h>

#include "slowdecay/cli/commands.hpp"
#include "slowdecay/cli/config.hpp"
#include "slowdecay/error.hpp"

using namespace slowdecay;
using namespace slowdecay::cli;

namespace {

ErrorKind kind_of(const json& doc, const Overrides& flags = {}) {
  try {
    ExperimentConfig::from_json(doc, flags);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::InvalidParameters;
}

}  // namespace

TEST_CASE("config: defaults give the pure case") {
  const auto cfg = ExperimentConfig::from_json({{"problem", json::object()}});
  const auto P = cfg.problem();
  CHECK(P.n() == 15);
  CHECK(P.p() == 3);
  CHECK(P.K().is_pure_power());
  CHECK(P.unforced());
  CHECK(cfg.ladder().size() == 15);
  CHECK(cfg.ladder().back() == 16384);
  CHECK(cfg.grid_points().size() == 50);
}

TEST_CASE("config: unknown keys rejected at every level") {
  CHECK(kind_of({{"problem", json::object()}, {"extra", 1}}) == ErrorKind::ConfigError);
  CHECK(kind_of({{"problem", {{"q", 1}}}}) == ErrorKind::ConfigError);
  CHECK(kind_of({{"problem", {{"K", {{"family", "pure_power"}, {"exp", 0}}}}}}) ==
        ErrorKind::ConfigError);
  CHECK(kind_of({{"problem", json::object()}, {"rates", {{"window", {{"width", 2}}}}}}) ==
        ErrorKind::ConfigError);
  CHECK(kind_of({{"problem", {{"f", {{"family", "manufactured"},
                                     {"solution", {{"kind", "cubic"}}}}}}}}) ==
        ErrorKind::ConfigError);
  CHECK(kind_of(json::object()) == ErrorKind::ConfigError);
}

TEST_CASE("config: ladders") {
  CHECK(kind_of({{"problem", json::object()}, {"ladder", {{"alphas", json::array()}}}}) ==
        ErrorKind::ConfigError);
  CHECK(kind_of({{"problem", json::object()}, {"ladder", {{"alphas", {2, 1}}}}}) ==
        ErrorKind::ConfigError);
  CHECK(kind_of({{"problem", json::object()}, {"ladder", {{"max_exp", -1}}}}) ==
        ErrorKind::ConfigError);
  const auto cfg = ExperimentConfig::from_json(
      {{"problem", json::object()}, {"ladder", {{"alphas", {1, 3, 9}}}}});
  CHECK(cfg.ladder() == std::vector<double>{1, 3, 9});
}

TEST_CASE("config: flags take precedence over the document") {
  Overrides flags;
  flags.grid_n = 7;
  flags.tol_rel = 1e-8;
  flags.ladder_max_exp = 3;
  flags.out = "elsewhere";
  const auto cfg = ExperimentConfig::from_json(
      {{"problem", json::object()},
       {"grid", {{"n", 20}}},
       {"tolerance", {{"rel", 1e-9}}},
       {"ladder", {{"alphas", {1, 2}}}},
       {"output_dir", "here"}},
      flags);
  CHECK(cfg.grid().n == 7);
  CHECK(cfg.tolerance().rel == 1e-8);
  CHECK(cfg.ladder().size() == 4);
  CHECK(cfg.output_dir() == "elsewhere");
  CHECK(cfg.resolved()["grid"]["n"] == 7);
}

TEST_CASE("config: fractional dimension needs the flag") {
  const json doc = {{"problem", {{"n", 14.5}}}};
  CHECK(kind_of(doc) == ErrorKind::ConfigError);
  Overrides flags;
  flags.allow_fractional_n = true;
  CHECK(ExperimentConfig::from_json(doc, flags).problem().n() == 14.5);
}

TEST_CASE("config: invalid parameters surface as config errors") {
  CHECK(kind_of({{"problem", {{"p", 0.5}}}}) == ErrorKind::ConfigError);
  CHECK(kind_of({{"problem", json::object()}, {"grid", {{"lo", 2}, {"hi", 1}}}}) ==
        ErrorKind::ConfigError);
  CHECK(kind_of({{"problem", json::object()}, {"tolerance", {{"rel", 0}}}}) ==
        ErrorKind::ConfigError);
}

TEST_CASE("config: manufactured forcing from the document") {
  const auto cfg = ExperimentConfig::from_json(
      {{"problem", {{"mu", 1},
                    {"f", {{"family", "manufactured"},
                           {"solution", {{"kind", "power"}, {"coef", 1}, {"rate", 0.5}}}}}}}});
  const auto lead = cfg.problem().f().at_zero();
  REQUIRE(lead);
  CHECK(lead->coef == doctest::Approx(6.25));
  CHECK(lead->exponent == doctest::Approx(-2.5));
}

TEST_CASE("exit codes") {
  CHECK(exit_code(ErrorKind::ConfigError) == kConfigFailure);
  CHECK(exit_code(ErrorKind::StepUnderflow) == kNumericalFailure);
  CHECK(exit_code(ErrorKind::NoNonnegativeRoot) == kNumericalFailure);
  CHECK(command_names().size() == 11);
}
