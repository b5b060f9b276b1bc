#include <doctest.h>

#include <string>

#include "ladder/config.hpp"
#include "ladder/errors.hpp"

using namespace ladder;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("empty file gives the default parameter set") {
  const auto c = parse_config_text("");
  CHECK(c.model.hamiltonian.leg_hopping == 0.38);
  CHECK(c.model.hamiltonian.interaction == 1.58);
  CHECK(c.sweep.bias_magnitude == 18.2);
  CHECK(c.model.occupation_cap() == 4);
  CHECK(c.run.initial_bias == 100.0);
  CHECK(validate(c).empty());
}

TEST_CASE("values are read per section") {
  const auto c = parse_config_text(R"(
# comment
[model]
L_s = 6
N = 3
boundary = periodic
[sweep]
direction = ground_state
alpha_grid = -0.5, -2, -10
r = 3
[quench]
delta_f_grid = 0, -0.76, -1.52
[run]
seed = 77
out = somewhere
)");
  CHECK(c.model.rungs == 6);
  CHECK(c.model.occupation_cap() == 3);
  CHECK(c.model.hamiltonian.boundary == Boundary::Periodic);
  CHECK(c.sweep.direction == SweepDirection::GroundState);
  CHECK(c.sweep.alpha_grid == std::vector<double>{-0.5, -2.0, -10.0});
  CHECK(c.sweep.rescale == 3.0);
  CHECK(c.quench.final_bias_grid.size() == 3);
  CHECK(c.run.seed == 77);
  CHECK(c.run.out == "somewhere");
}

TEST_CASE("serialization round-trips") {
  RunConfig c;
  c.model.max_occupation = 2;
  c.model.hamiltonian.interaction = 0.1 + 0.2;  // not exactly representable in short decimal
  c.sweep.alpha = 1.0 / 3.0;
  c.sweep.alpha_grid = {0.1, 1e-7, 12.5};
  c.quench.final_bias = -0.76;
  c.thermal.energies_from = "q/quench_scan_summary.csv";
  c.doublewell.particles = {2, 3};
  const auto text = serialize(c);
  const auto back = parse_config_text(text);
  CHECK(back == c);
  CHECK(serialize(back) == text);
  CHECK(back.model.hamiltonian.interaction == 0.1 + 0.2);
  CHECK(parse_config_text(serialize(RunConfig{})) == RunConfig{});
}

TEST_CASE("unknown keys are rejected") {
  CHECK(error_of("[model]\nJpar = 0.1\n").find("model.Jpar: unknown key") != std::string::npos);
  CHECK(error_of("[modle]\nN = 2\n").find("unknown key") != std::string::npos);
  CHECK(error_of("N = 2\n").find("outside any section") != std::string::npos);
}

TEST_CASE("sign constraint on sweep rates") {
  CHECK(error_of("[sweep]\ndirection = inverse\nalpha_grid = 1, -2\n").find("inverse sweeps need alpha > 0") !=
        std::string::npos);
  CHECK(error_of("[sweep]\ndirection = ground_state\nalpha = 2\n").find("need alpha < 0") != std::string::npos);
  CHECK(error_of("[sweep]\ndirection = ground_state\nalpha = -2\n").empty());
}

TEST_CASE("all violations are reported at once") {
  const auto msg = error_of("[model]\nN = 0\nU = x\n[propagation]\ndt = -1\n[sweep]\nr = 0.5\n[run]\nthreads = -2\n");
  CHECK(msg.find("model.N") != std::string::npos);
  CHECK(msg.find("model.U: not a number") != std::string::npos);
  CHECK(msg.find("dt must be positive") != std::string::npos);
  CHECK(msg.find("sweep.r") != std::string::npos);
  CHECK(msg.find("run.threads") != std::string::npos);
}

TEST_CASE("model constraints") {
  CHECK(error_of("[model]\nL_s = 1\nN = 5\nn_max = 2\n").find("no state fits") != std::string::npos);
  CHECK(error_of("[model]\nL_s = 2\nboundary = periodic\n").find("model:") != std::string::npos);
  CHECK_FALSE(error_of("[model]\nL_s = 2\nN = 2\n[model]\nN = 3\n").empty());
}

TEST_CASE("missing file") { CHECK_THROWS_AS(parse_config("/nonexistent/run.ini"), ConfigError); }
