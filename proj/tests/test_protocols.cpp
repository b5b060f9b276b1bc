#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "ladder/doublewell.hpp"
#include "ladder/errors.hpp"
#include "ladder/protocols.hpp"

using namespace ladder;

namespace {

LadderSystem small_ladder(int rungs = 2, int n = 2) {
  return LadderSystem(HamiltonianParams{}, FockBasis(LadderGeometry{rungs}, n, n));
}

}  // namespace

TEST_CASE("rescale policy") {
  CHECK(default_rescale(0.1) == 7.0);
  CHECK(default_rescale(0.5) == 7.0);
  CHECK(default_rescale(1.25) == doctest::Approx(4.5));
  CHECK(default_rescale(2.0) == 2.0);
  CHECK(default_rescale(30.0) == 2.0);
  CHECK(RescalePolicy{3.0}(0.1) == 3.0);
}

TEST_CASE("rung period") {
  CHECK(rung_period(0.0) == doctest::Approx(std::numbers::pi));
  CHECK(rung_period(18.2) == doctest::Approx(2 * std::numbers::pi / std::sqrt(18.2 * 18.2 + 4)));
}

TEST_CASE("maxima with prominence") {
  // the bump at 3 rises only 0.05 above the saddle at 2
  std::vector<double> y{0, 1, 0.5, 0.55, 0.5, 0, 2, 0};
  const auto all = find_maxima(y, 0.0);
  CHECK(all == std::vector<std::size_t>{1, 3, 6});
  const auto prominent = find_maxima(y, 0.1);
  CHECK(prominent == std::vector<std::size_t>{1, 6});
}

TEST_CASE("period average of a sampled cosine") {
  std::vector<double> t, y;
  for (int i = 0; i <= 2000; ++i) {
    t.push_back(0.01 * i);
    y.push_back(0.3 + 0.05 * std::cos(2.0 * std::numbers::pi * t.back() / 3.0 + 0.4));
  }
  const auto avg = average_over_periods(t, y, 1e-4);
  CHECK(avg.resolved);
  CHECK(avg.periods == 5);  // six maxima in [0, 20]
  CHECK(avg.mean == doctest::Approx(0.3).epsilon(1e-4));
  CHECK(avg.amplitude == doctest::Approx(0.05).epsilon(1e-3));

  const auto last = average_last_period(t, y, 1e-4);
  CHECK(last.periods == 1);
  CHECK(last.mean == doctest::Approx(0.3).epsilon(1e-3));
  CHECK(last.t_end - last.t_begin == doctest::Approx(3.0).epsilon(1e-2));
  const auto around = average_last_period(t, y, 1e-4, 7.0);
  CHECK(around.t_begin <= 7.0);
  CHECK(around.t_end >= 7.0);

  const std::vector<double> flat(t.size(), 0.2);
  const auto fallback = average_last_period(t, flat, 1e-4);
  CHECK_FALSE(fallback.resolved);
  CHECK(fallback.mean == doctest::Approx(0.2));
}

TEST_CASE("initial state fills the left leg") {
  const auto sys = small_ladder(3, 3);
  const auto exact = initial_state(sys, std::numeric_limits<double>::infinity());
  CHECK(leg_population(exact, sys.basis) < 1e-28);
  const auto finite = initial_state(sys, 100.0);
  CHECK(leg_population(finite, sys.basis) < 1e-3);
  CHECK(fidelity(exact, finite) > 0.999);
}

TEST_CASE("adiabatic state picks the level connected to the reference") {
  const LadderSystem sys(HamiltonianParams{0.0, 10.0}, FockBasis(LadderGeometry{1}, 2, 2));
  const auto bare = initial_state(sys, std::numeric_limits<double>::infinity());
  // at Delta = -60 the state with both bosons left is the top level
  const auto top = adiabatic_state(sys, -60.0, bare);
  CHECK(fidelity(top, bare) > 0.999);
  CHECK(leg_population(top, sys.basis) < 1e-3);
}

TEST_CASE("two-level sweep reproduces Landau-Zener") {
  const LadderSystem sys(HamiltonianParams{}, FockBasis(LadderGeometry{1}, 1, 1));
  const auto psi0 = initial_state(sys, std::numeric_limits<double>::infinity());
  PropagationSettings st;
  for (double x : {0.5, 2.0}) {
    const double alpha = 2 * std::numbers::pi / x;
    const auto ref = doublewell::p_lz(alpha);
    for (auto dir : {SweepDirection::GroundState, SweepDirection::Inverse}) {
      SweepOptions o;
      o.bias_magnitude = 40.0;
      o.rate = alpha;
      o.rescale = 1.0;
      o.sampling.momentum = false;
      const auto start = adiabatic_state(sys, dir == SweepDirection::GroundState ? 40.0 : -40.0, psi0);
      const auto r = run_sweep(sys, start, dir, o, st);
      CHECK(std::abs(r.transfer - ref) < 2e-3);
      CHECK(r.rate == doctest::Approx(dir == SweepDirection::Inverse ? alpha : -alpha));
      CHECK(r.inverse_rate == doctest::Approx(x));
    }
  }
}

TEST_CASE("quench conserves energy and norm") {
  const auto sys = small_ladder(3, 3);
  const auto psi0 = initial_state(sys);
  QuenchOptions o;
  o.final_bias = -0.76;
  o.duration = 10.0;
  const auto r = run_quench(sys, psi0, o, PropagationSettings{});
  CHECK(r.series.diagnostics.energy_drift < 1e-6);
  CHECK(r.series.diagnostics.max_norm_drift < 1e-8 * 10.0);
  CHECK(r.boundary_time == doctest::Approx(3 / (2 * 0.38)));
  CHECK(r.low_density_rule == false);  // n = 1
  CHECK(r.energy == doctest::Approx(r.series.records.front().energy));
}

TEST_CASE("rate scan is independent of the worker count") {
  const auto sys = small_ladder(2, 2);
  const auto psi0 = initial_state(sys);
  const std::vector<double> rates{1.0, 3.0, 8.0};
  SweepOptions base;
  base.sampling.momentum = false;
  PropagationSettings st;
  const auto one = rate_scan(sys, psi0, SweepDirection::Inverse, rates, {}, base, st, 1);
  const auto three = rate_scan(sys, psi0, SweepDirection::Inverse, rates, {}, base, st, 3);
  REQUIRE(one.rows.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    REQUIRE(one.rows[i].result);
    REQUIRE(three.rows[i].result);
    CHECK(one.rows[i].parameter == rates[i]);
    CHECK(one.rows[i].result->transfer == three.rows[i].result->transfer);
  }
  CHECK(one.best == three.best);
}

TEST_CASE("rate scan validates and isolates failures") {
  const auto sys = small_ladder(2, 2);
  const auto psi0 = initial_state(sys);
  const std::vector<double> descending{3.0, 1.0};
  CHECK_THROWS_AS(rate_scan(sys, psi0, SweepDirection::Inverse, descending, {}, {}, {}), ConfigError);

  PropagationSettings st;
  st.max_time = 40.0;  // too short for the slow row only
  SweepOptions base;
  base.sampling.momentum = false;
  const std::vector<double> rates{0.5, 20.0};
  int calls = 0;
  const auto scan = rate_scan(sys, psi0, SweepDirection::Inverse, rates, {}, base, st, 1,
                              [&](std::size_t, const ScanRow<SweepResult>&) { ++calls; });
  CHECK(calls == 2);
  CHECK_FALSE(scan.rows[0].result.has_value());
  CHECK_FALSE(scan.rows[0].error.empty());
  CHECK(scan.rows[1].result.has_value());
  CHECK(scan.best == 1);
}

TEST_CASE("direction names") {
  CHECK(to_string(SweepDirection::Inverse) == "inverse");
  CHECK(direction_from_string("ground_state") == SweepDirection::GroundState);
  CHECK_THROWS_AS(direction_from_string("up"), ConfigError);
}
