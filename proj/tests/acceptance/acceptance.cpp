// Acceptance run: one PASS/FAIL line per criterion, details indented below.
#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "ladder/doublewell.hpp"
#include "ladder/fock.hpp"
#include "ladder/hamiltonian.hpp"
#include "ladder/observables.hpp"
#include "ladder/propagator.hpp"
#include "ladder/protocols.hpp"
#include "ladder/thermal.hpp"
#include "support.hpp"

using namespace ladder;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kLegHopping = 0.38;

int failures = 0;

template <typename... Args>
void detail(const char* fmt, Args... args) {
  std::printf("    ");
  std::printf(fmt, args...);
  std::printf("\n");
  std::fflush(stdout);
}

void report(int id, bool ok, const char* what, std::chrono::steady_clock::time_point start) {
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("criterion %d: %s  %s  (%.1f s)\n", id, ok ? "PASS" : "FAIL", what, secs);
  std::fflush(stdout);
  if (!ok) ++failures;
}

LadderSystem ladder(int rungs, int particles, double interaction = 1.58) {
  HamiltonianParams p;
  p.interaction = interaction;
  return LadderSystem(p, FockBasis(LadderGeometry{rungs}, particles, std::min(particles, 4)));
}

SweepOptions sweep_options(bool momentum) {
  SweepOptions o;
  o.sampling.momentum = momentum;
  return o;
}

// Rows come back in the order of xs (ascending 2pi/alpha).
RateScan scan(const LadderSystem& sys, const StateVector& psi, SweepDirection d, const std::vector<double>& xs,
              bool momentum = false) {
  std::vector<double> rates;
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) rates.push_back(kTwoPi / *it);
  auto out = rate_scan(sys, psi, d, rates, RescalePolicy{}, sweep_options(momentum), PropagationSettings{});
  std::reverse(out.rows.begin(), out.rows.end());
  if (out.best) out.best = out.rows.size() - 1 - *out.best;
  return out;
}

double transfer(const ScanRow<SweepResult>& row) {
  return row.result ? row.result->transfer : std::numeric_limits<double>::quiet_NaN();
}

// Fraction of the left-leg momentum weight at |k| > pi/2.
double high_k_fraction(const std::vector<double>& nk, const MomentumGrid& grid) {
  double high = 0.0, total = 0.0;
  for (int j = 0; j < static_cast<int>(nk.size()); ++j) {
    total += nk[j];
    if (std::abs(grid.k(j)) > std::numbers::pi / 2) high += nk[j];
  }
  return high / total;
}

void two_level() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (double x : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) {
    const double a = kTwoPi / x;
    for (auto d : {SweepDirection::GroundState, SweepDirection::Inverse}) {
      const double n = doublewell::integrate_doublewell(1, 1.58, a, d, doublewell::IntegrationOptions{},
                                                        PropagationSettings{});
      worst = std::max(worst, std::abs(n - doublewell::p_lz(a)));
      detail("2pi/alpha=%-4g %-12s n_R=%.6f p_LZ=%.6f", x, to_string(d).c_str(), n, doublewell::p_lz(a));
    }
  }
  detail("max |dn_R| = %.2e (bound 0.01, |Delta0| = 60)", worst);
  report(1, worst < 0.01, "two-level Landau-Zener", start);
}

void closed_forms() {
  const auto start = std::chrono::steady_clock::now();
  // (1 - e^-2)(1 - e^-2 / 2) and 1 - (e^-0.04 + e^-2.04) / 2, evaluated independently
  const double gs_ref = 0.806154894589;
  const double inv_ref = 0.454590924985;
  const double gs = doublewell::gs_transfer(2, kTwoPi);
  const double inv = doublewell::inverse_transfer(2, kTwoPi, 10.0);
  const bool hand = std::abs(gs - gs_ref) < 1e-6 && std::abs(inv - inv_ref) < 1e-6;
  detail("n=2, alpha=2pi: gs=%.9f (hand %.9f)  inverse=%.9f (hand %.9f)", gs, gs_ref, inv, inv_ref);
  detail("listed reference values 0.80600 / 0.45457 differ by %.1e / %.1e", std::abs(gs - 0.80600),
         std::abs(inv - 0.45457));

  double worst_gs = 0.0, worst_inv = 0.0;
  for (int n = 1; n <= 3; ++n) {
    for (double x : {0.1, 0.3, 1.0, 3.0, 10.0, 30.0}) {
      const double a = kTwoPi / x;
      const double og = doublewell::integrate_doublewell(n, 10.0, a, SweepDirection::GroundState,
                                                         doublewell::IntegrationOptions{}, PropagationSettings{});
      const double oi = doublewell::integrate_doublewell(n, 10.0, a, SweepDirection::Inverse,
                                                         doublewell::IntegrationOptions{}, PropagationSettings{});
      const double fg = doublewell::gs_transfer(n, a);
      const double fi = doublewell::inverse_transfer(n, a, 10.0);
      worst_gs = std::max(worst_gs, std::abs(og - fg));
      worst_inv = std::max(worst_inv, std::abs(oi - fi));
      detail("n=%d 2pi/alpha=%-4g gs: formula %.4f oracle %.4f | inverse: formula %.4f oracle %.4f", n, x, fg, og, fi,
             oi);
    }
  }
  detail("max |formula - oracle|: ground-state %.4f, inverse %.4f (bound 0.05)", worst_gs, worst_inv);
  report(2, hand && worst_gs < 0.05 && worst_inv < 0.05, "double-well closed forms", start);
}

void fast_collapse() {
  const auto start = std::chrono::steady_clock::now();
  const auto sys = ladder(4, 3);
  const auto psi = initial_state(sys);
  const std::vector<double> xs{0.1, 0.3};
  const auto inv = scan(sys, psi, SweepDirection::Inverse, xs);
  const auto gs = scan(sys, psi, SweepDirection::GroundState, xs);
  bool ok = true;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double p = doublewell::p_lz(kTwoPi / xs[i]);
    const double a = transfer(inv.rows[i]), b = transfer(gs.rows[i]);
    const bool row = std::abs(a - b) < 0.02 && std::abs(a - p) < 0.02 && std::abs(b - p) < 0.02;
    ok = ok && row;
    detail("2pi/alpha=%g inverse %.4f ground-state %.4f p_LZ %.4f", xs[i], a, b, p);
  }
  report(3, ok, "fast-sweep collapse at n = 0.75", start);
}

// Returns the location of the inverse-sweep maximum at N = 4.
double breakdown() {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> xs{0.3, 1.0, 2.0, 3.0, 4.0, 6.0, 12.0};
  bool ok = true;
  double last_peak = 2.0;
  double x_star = 0.0;
  for (int n : {4, 5, 6}) {
    const auto sys = ladder(4, n);
    const auto psi = initial_state(sys);
    const auto inv = scan(sys, psi, SweepDirection::Inverse, xs);
    const auto gs = scan(sys, psi, SweepDirection::GroundState, xs);
    std::string line_i, line_g;
    char buf[32];
    for (std::size_t i = 0; i < xs.size(); ++i) {
      std::snprintf(buf, sizeof buf, " %.4f", transfer(inv.rows[i]));
      line_i += buf;
      std::snprintf(buf, sizeof buf, " %.4f", transfer(gs.rows[i]));
      line_g += buf;
    }
    detail("N=%d inverse:%s", n, line_i.c_str());
    detail("N=%d ground :%s", n, line_g.c_str());
    const bool complete = inv.best.has_value() && gs.rows.back().result.has_value();
    bool interior = false, monotone = true;
    double peak = 0.0;
    if (complete) {
      const std::size_t b = *inv.best;
      peak = transfer(inv.rows[b]);
      interior = b > 0 && b + 1 < xs.size() && peak > transfer(inv.rows[b - 1]) && peak > transfer(inv.rows[b + 1]);
      for (std::size_t i = 1; i < xs.size(); ++i) monotone = monotone && transfer(gs.rows[i]) > transfer(gs.rows[i - 1]) - 1e-3;
      if (n == 4) x_star = xs[b];
    }
    const bool top = complete && transfer(gs.rows.back()) > 0.95;
    const bool falls = peak < last_peak;
    detail("N=%d: interior max %s (%.4f at 2pi/alpha=%g), ground-state monotone %s, reaches %.4f, peak below lower density %s",
           n, interior ? "yes" : "no", peak, complete ? xs[*inv.best] : 0.0, monotone ? "yes" : "no",
           complete ? transfer(gs.rows.back()) : 0.0, falls ? "yes" : "no");
    ok = ok && complete && interior && monotone && top && falls;
    last_peak = peak;
  }
  report(4, ok, "inverse-sweep breakdown at n = 1, 1.25, 1.5", start);
  return x_star;
}

void broadening(double x_star) {
  const auto start = std::chrono::steady_clock::now();
  const auto sys = ladder(4, 4);
  const auto psi = initial_state(sys);
  const auto g0 = one_body_density_matrix(psi, sys.basis, Leg::Left);
  const auto nk0 = momentum_distribution(g0, sys.grid);
  const double k2_0 = *momentum_width(nk0, sys.grid);
  const double high_0 = high_k_fraction(nk0, sys.grid);
  detail("initial: <k^2>_L = %.4f, weight at |k| > pi/2 = %.4f; transfer maximum at 2pi/alpha = %g", k2_0, high_0,
         x_star);
  const std::vector<double> xs{1.5, 2.0, 3.0, 4.0};
  const auto inv = scan(sys, psi, SweepDirection::Inverse, xs, true);
  bool doubled = false, emergent = true;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!inv.rows[i].result) {
      emergent = false;
      continue;
    }
    const auto& end = inv.rows[i].result->at_sweep_end;
    const double ratio = *end.k2_left / k2_0;
    const double high = high_k_fraction(end.nk_left, sys.grid);
    if (xs[i] <= x_star && ratio >= 2.0) doubled = true;
    emergent = emergent && high > high_0;
    detail("2pi/alpha=%g: <k^2>_L at sweep end %.4f (x%.2f), weight at |k| > pi/2 = %.4f", xs[i], *end.k2_left, ratio,
           high);
  }
  report(5, x_star > 0.0 && doubled && emergent, "momentum broadening in the left leg", start);
}

void invariants() {
  const auto start = std::chrono::steady_clock::now();
  const auto sys = ladder(4, 4);
  const auto psi = initial_state(sys);
  bool ok = true;

  const auto sweep = run_sweep(sys, psi, SweepDirection::Inverse, [] {
    auto o = sweep_options(true);
    o.rate = kTwoPi / 2.0;
    return o;
  }(), PropagationSettings{});
  const double sweep_time = sweep.series.records.back().t - sweep.series.records.front().t;
  const double sweep_drift = sweep.series.diagnostics.max_norm_drift / sweep_time;
  QuenchOptions qo;
  qo.final_bias = -2 * kLegHopping;
  const auto quench = run_quench(sys, psi, qo, PropagationSettings{});
  const double quench_drift = quench.series.diagnostics.max_norm_drift / qo.duration;
  detail("norm drift per unit time: sweep %.2e, quench %.2e (bound 1e-8)", sweep_drift, quench_drift);
  ok = ok && sweep_drift < 1e-8 && quench_drift < 1e-8;
  detail("quench energy drift %.2e relative (bound 1e-6)", quench.energy_drift);
  ok = ok && quench.energy_drift < 1e-6;

  const auto& final_state = sweep.series.final_state;
  double worst_sum = 0.0, worst_eig = 0.0, worst_trace = 0.0;
  for (Leg leg : {Leg::Left, Leg::Right}) {
    const auto g = one_body_density_matrix(final_state, sys.basis, leg);
    const double expected = leg == Leg::Right ? 4.0 * leg_population(final_state, sys.basis)
                                              : 4.0 * (1.0 - leg_population(final_state, sys.basis));
    worst_trace = std::max(worst_trace, std::abs(g.trace().real() - expected));
    worst_eig = std::min(worst_eig, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(g).eigenvalues().minCoeff());
    const auto nk = momentum_distribution(g, sys.grid);
    worst_sum = std::max(worst_sum, std::abs(momentum_sum(nk, sys.grid, sys.rungs()) - g.trace().real()));
  }
  detail("G: smallest eigenvalue %.2e, trace error %.2e; momentum sum rule error %.2e (bound 4e-8)", worst_eig,
         worst_trace, worst_sum);
  ok = ok && worst_eig > -1e-12 && worst_trace < 1e-10 && worst_sum < 1e-8 * 4;

  const Eigen::MatrixXcd flat = Eigen::MatrixXcd::Identity(4, 4);
  const double h = sys.grid.spacing();
  const double width = *momentum_width(momentum_distribution(flat, sys.grid), sys.grid);
  const double quad = std::numbers::pi * std::numbers::pi / 3.0 + h * h / 6.0;
  detail("flat width %.12f, pi^2/3 + h^2/6 = %.12f", width, quad);
  ok = ok && std::abs(width - quad) < 1e-12;
  report(6, ok, "observable invariants", start);
}

void thermalization() {
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  {
    const auto sys = ladder(4, 6);
    const auto psi = initial_state(sys);
    for (double m : {0.0, -2.0, -4.0}) {
      QuenchOptions o;
      o.final_bias = m * kLegHopping;
      o.sampling.momentum = false;
      const auto q = run_quench(sys, psi, o, PropagationSettings{});
      const auto tp = thermal_point(sys, o.final_bias, q.energy);
      const bool row = std::abs(q.n_right.mean - tp.n_right) <= q.n_right.amplitude;
      ok = ok && row;
      detail("Delta_f=%gJ_par: long-time n_R %.5f +- %.5f, canonical %.5f (beta %.4f)", m, q.n_right.mean,
             q.n_right.amplitude, tp.n_right, tp.beta);
    }
  }
  for (double u : {1.58, 3.0}) {
    const auto sys = ladder(4, 6, u);
    const auto psi = initial_state(sys);
    double beta[2];
    int i = 0;
    for (double m : {-3.0, -5.0}) {
      const double df = m * kLegHopping;
      beta[i++] = thermal_point(sys, df, quench_energy(sys, psi, df)).beta;
    }
    const bool flips = beta[0] > 0.0 && beta[1] < 0.0;
    ok = ok && flips;
    detail("U=%g: beta(-3J_par)=%.4f beta(-5J_par)=%.4f", u, beta[0], beta[1]);
  }
  report(7, ok, "thermalization and the sign change of beta", start);
}

void cross_oracles() {
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  for (int rungs = 1; rungs <= 2; ++rungs) {
    for (int n = 1; n <= 2; ++n) {
      const FockBasis basis(LadderGeometry{rungs}, n, n);
      const auto states = oracle::brute_force_states(2 * rungs, n, n);
      ok = ok && states.size() == basis.dimension();
      for (auto bc : {Boundary::Open}) {
        HamiltonianParams p;
        p.boundary = bc;
        const BiasedHamiltonian h(p, basis);
        const Eigen::MatrixXd dense = oracle::dense_hamiltonian(states, rungs, p, 1.3);
        const Eigen::MatrixXd sparse = oracle::to_dense(h.at(1.3));
        for (std::size_t a = 0; a < states.size(); ++a) {
          for (std::size_t b = 0; b < states.size(); ++b) {
            const auto ia = basis.index_of(FockState(states[a].begin(), states[a].end()));
            const auto ib = basis.index_of(FockState(states[b].begin(), states[b].end()));
            ok = ok && sparse(ia, ib) == dense(a, b);
          }
        }
      }
    }
  }
  detail("sparse == dense for L_s <= 2, N <= 2: %s", ok ? "exact" : "mismatch");

  std::size_t counted = 0;
  for (int rungs = 1; rungs <= 4; ++rungs) {
    for (int n = 1; n <= 5; ++n) {
      for (int cap : {1, 2, 4}) {
        if (2 * rungs * cap < n) continue;
        const bool same = oracle::brute_force_states(2 * rungs, n, cap).size() ==
                          FockBasis(LadderGeometry{rungs}, n, cap).dimension();
        ok = ok && same;
        ++counted;
      }
    }
  }
  detail("basis counts match exhaustive enumeration in %zu cases", counted);

  double worst = 0.0;
  for (int n : {2, 3, 4}) {
    const FockBasis basis(LadderGeometry{n}, n, std::min(n, 4));
    const BiasedHamiltonian h(HamiltonianParams{}, basis);
    for (double bias : {0.0, -1.0, 18.2}) {
      const double exact =
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(oracle::to_dense(h.at(bias))).eigenvalues()(0);
      worst = std::max(worst, std::abs(ground_state(BiasedMap(h, bias)).energy - exact));
    }
  }
  detail("Lanczos vs dense ground energy: max error %.2e (bound 1e-8)", worst);
  ok = ok && worst < 1e-8;
  report(8, ok, "cross-oracle consistency", start);
}

}  // namespace

int main() {
  two_level();
  closed_forms();
  fast_collapse();
  const double x_star = breakdown();
  broadening(x_star);
  invariants();
  thermalization();
  cross_oracles();
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
