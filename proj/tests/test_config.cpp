#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "llb/config.hpp"
#include "llb/expression.hpp"

using namespace llb;

namespace {

const char* kMinimal = R"(grid:
  modes: 4
physics:
  m0:
    constant: [1, 0, 0]
noise:
  atoms:
    - {l: 0.5, w: 1.0}
)";

std::string error_of(const std::string& text) {
  try {
    parse_config(text, "cfg.yaml");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("minimal config takes defaults") {
  const auto c = parse_config(kMinimal);
  CHECK(c.grid->dim() == 1);
  CHECK(c.grid->colloc_per_dim() == 8);
  CHECK(c.solver.dt == 1e-3);
  CHECK(c.solver.scheme == Scheme::etd1);
  CHECK(c.solver.blowup_guard == 1e6);
  CHECK(c.nu.size() == 1);
  CHECK(c.control.values().isApproxToConstant(1.0));
  CHECK(c.experiment.rate.penalty_growth == 10.0);
  CHECK(c.experiment.rate.outer_iterations == 5);
  CHECK(c.experiment.stop_factor == 10.0);
}

TEST_CASE("shipped default config is the standard scenario") {
  const auto c = load_config(std::string(LLB_SOURCE_DIR) + "/configs/default.yaml");
  const auto s = standard_scenario_1d();
  CHECK(c.grid->same_layout(*s.grid));
  CHECK((c.initial_field().coeffs() - s.m0().coeffs()).norm() == 0.0);
  CHECK((c.marcus().h.values() - s.marcus().h.values()).norm() == 0.0);
  CHECK(c.control.values() == s.theta.values());
  CHECK(c.nu.size() == s.nu.size());
}

TEST_CASE("unknown keys are rejected with a line number") {
  const auto msg = error_of(std::string(kMinimal) + "solver:\n  dtt: 0.1\n");
  CHECK(msg.find("cfg.yaml:10") != std::string::npos);
  CHECK(msg.find("solver.dtt") != std::string::npos);
  CHECK(error_of("grid:\n  modes: 4\n  colour: red\n").find("grid.colour") != std::string::npos);
}

TEST_CASE("malformed documents and values") {
  CHECK(error_of("grid: [1, 2\n").find("cfg.yaml:") == 0);
  CHECK(!error_of("grid:\n  modes: four\n").empty());
  CHECK(!error_of("grid:\n  modes: 4\n  colloc: 5\n").empty());
  CHECK(!error_of(std::string(kMinimal) + "solver:\n  scheme: rk45\n").empty());
  CHECK(!error_of("grid:\n  modes: 4\nnoise:\n  atoms:\n    - {l: 2.0, w: 1.0}\n").empty());
  CHECK(!error_of(std::string(kMinimal) + "control:\n  cells: 2\n  values: [[1.0], [1.0, 2.0]]\n").empty());
}

TEST_CASE("density noise") {
  const auto c = parse_config("grid:\n  modes: 4\nnoise:\n  density: \"exp(-abs(l))\"\n  quadrature_nodes: 100\n");
  CHECK(c.nu.size() == 200);
  CHECK(c.nu.mass() == doctest::Approx(2.0 * (1.0 - std::exp(-1.0))).epsilon(1e-4));
  CHECK(!error_of("grid:\n  modes: 4\nnoise:\n  density: \"1/abs(l)\"\n").empty());
  CHECK(!error_of("grid:\n  modes: 4\nnoise:\n  density: \"exp(-abs(l)\"\n").empty());
}

TEST_CASE("control matrix") {
  const auto c = parse_config(std::string(kMinimal) + "control:\n  cells: 2\n  values: [[0.5], [2.0]]\n");
  CHECK(c.control.values()(0, 0) == 0.5);
  CHECK(c.control.values()(1, 0) == 2.0);
  CHECK(c.control.edges()[1] == 0.5);
}

TEST_CASE("expression parser") {
  CHECK(Expression::parse("1 + 2 * 3")(0.0) == 7.0);
  CHECK(Expression::parse("-l^2")(3.0) == -9.0);
  CHECK(Expression::parse("2^3^2")(0.0) == 512.0);
  CHECK(Expression::parse("exp(-abs(l)) / sqrt(4)")(-1.0) == doctest::Approx(std::exp(-1.0) / 2));
  CHECK(Expression::parse("cos(pi * l)")(1.0) == doctest::Approx(-1.0));
  CHECK(Expression::parse("1e-2 * l")(2.0) == doctest::Approx(0.02));
  try {
    Expression::parse("1 + foo(l)");
    FAIL("expected an error");
  } catch (const ExpressionError& e) {
    CHECK(e.column() == 4);
  }
  CHECK_THROWS_AS(Expression::parse("(l"), ExpressionError);
  CHECK_THROWS_AS(Expression::parse("l l"), ExpressionError);
}
