#include "ladder/protocols.hpp"

#include <omp.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ladder/errors.hpp"

namespace ladder {

std::string to_string(SweepDirection d) { return d == SweepDirection::Inverse ? "inverse" : "ground_state"; }

SweepDirection direction_from_string(const std::string& s) {
  if (s == "inverse") return SweepDirection::Inverse;
  if (s == "ground_state") return SweepDirection::GroundState;
  throw ConfigError("direction must be 'inverse' or 'ground_state', got '" + s + "'");
}

LadderSystem::LadderSystem(const HamiltonianParams& p, FockBasis b, int points_per_site)
    : params(p),
      basis(std::move(b)),
      hamiltonian(p, basis),
      grid(MomentumGrid::for_rungs(basis.geometry().rungs, points_per_site)) {
  if (points_per_site < 2) throw ConfigError("momentum grid needs at least 2 points per site");
}

ObservableRecord measure(const LadderSystem& system, const StateVector& psi, double t, double bias,
                         const SamplingOptions& sampling) {
  ObservableRecord r;
  r.t = t;
  r.bias = bias;
  r.norm = psi.norm();
  r.n_right = leg_population(psi, system.basis);
  std::vector<Complex> h_psi(psi.dimension());
  system.hamiltonian.apply(bias, psi.amplitudes, h_psi);
  Complex e = 0.0;
  for (std::size_t i = 0; i < h_psi.size(); ++i) e += std::conj(psi.amplitudes[i]) * h_psi[i];
  r.energy = e.real();
  if (sampling.momentum) {
    r.nk_left = momentum_distribution(one_body_density_matrix(psi, system.basis, Leg::Left), system.grid);
    r.nk_right = momentum_distribution(one_body_density_matrix(psi, system.basis, Leg::Right), system.grid);
    r.k2_left = momentum_width(r.nk_left, system.grid);
    r.k2_right = momentum_width(r.nk_right, system.grid);
  }
  if (sampling.entropy) r.entropy = entanglement_entropy(psi, system.basis, {CutKind::Legs, 0});
  return r;
}

ObservableSampler make_sampler(const LadderSystem& system, const SamplingOptions& sampling) {
  return [&system, sampling](double t, double bias, const StateVector& psi) {
    return measure(system, psi, t, bias, sampling);
  };
}

namespace {

// H0 restricted to states with an empty right leg; every other basis state
// is decoupled and lifted above the Gershgorin bound of H0.
class LeftSectorMap final : public LinearMap {
 public:
  explicit LeftSectorMap(const LadderSystem& system) : system_(&system) {
    const auto& h0 = system.hamiltonian.static_part();
    const auto rp = h0.row_ptr();
    const auto vals = h0.values();
    double bound = 0.0;
    for (std::size_t i = 0; i < h0.dimension(); ++i) {
      double row = 0.0;
      for (std::size_t p = rp[i]; p < rp[i + 1]; ++p) row += std::abs(vals[p]);
      bound = std::max(bound, row);
    }
    lift_ = 2.0 * bound + 1.0;
    inside_.resize(h0.dimension());
    for (std::size_t i = 0; i < inside_.size(); ++i) inside_[i] = system.basis.right_count(i) == 0;
  }

  std::size_t dimension() const override { return inside_.size(); }

  void apply(std::span<const Complex> x, std::span<Complex> y) const override {
    std::vector<Complex> px(x.begin(), x.end());
    for (std::size_t i = 0; i < px.size(); ++i) {
      if (!inside_[i]) px[i] = 0.0;
    }
    system_->hamiltonian.static_part().apply(px, y);
    for (std::size_t i = 0; i < px.size(); ++i) {
      if (!inside_[i]) y[i] = lift_ * x[i];
    }
  }

 private:
  const LadderSystem* system_;
  std::vector<bool> inside_;
  double lift_ = 0.0;
};

}  // namespace

StateVector initial_state(const LadderSystem& system, double initial_bias, std::uint64_t seed, double tol) {
  if (std::isinf(initial_bias) && initial_bias > 0.0) {
    return ground_state(LeftSectorMap(system), tol, seed).state;
  }
  const BiasedMap h(system.hamiltonian, initial_bias);
  return ground_state(h, tol, seed).state;
}

StateVector adiabatic_state(const LadderSystem& system, double bias, const StateVector& reference) {
  constexpr std::size_t cap = 4000;
  const std::size_t dim = system.basis.dimension();
  if (dim > cap) throw ConfigError("adiabatic_state: dimension too large for dense diagonalization");
  if (reference.amplitudes.size() != dim) throw DomainError("adiabatic_state: reference has wrong dimension");
  const auto h = system.hamiltonian.at(bias);
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(dim, dim);
  const auto rows = h.row_ptr();
  const auto cols = h.cols();
  const auto vals = h.values();
  for (std::size_t i = 0; i < dim; ++i)
    for (auto p = rows[i]; p < rows[i + 1]; ++p) dense(i, cols[p]) = vals[p];
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
  Eigen::Index best = 0;
  double best_overlap = -1.0;
  for (Eigen::Index n = 0; n < es.eigenvectors().cols(); ++n) {
    Complex overlap{};
    for (std::size_t i = 0; i < dim; ++i) overlap += es.eigenvectors()(i, n) * reference.amplitudes[i];
    if (std::abs(overlap) > best_overlap) {
      best_overlap = std::abs(overlap);
      best = n;
    }
  }
  StateVector out;
  out.amplitudes.resize(dim);
  for (std::size_t i = 0; i < dim; ++i) out.amplitudes[i] = es.eigenvectors()(i, best);
  return out;
}

double default_rescale(double inverse_rate) {
  constexpr double fast = 0.5;
  constexpr double slow = 2.0;
  if (inverse_rate <= fast) return 7.0;
  if (inverse_rate >= slow) return 2.0;
  return 7.0 + (inverse_rate - fast) * (2.0 - 7.0) / (slow - fast);
}

double rung_period(double bias) {
  return 2.0 * std::numbers::pi / std::sqrt(bias * bias + 4.0 * kRungHopping * kRungHopping);
}

std::vector<std::size_t> find_maxima(std::span<const double> y, double prominence) {
  std::vector<std::size_t> peaks;
  const std::size_t n = y.size();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(y[i] > y[i - 1] && y[i] >= y[i + 1])) continue;
    double left_min = y[i];
    for (std::size_t j = i; j-- > 0;) {
      if (y[j] > y[i]) break;
      left_min = std::min(left_min, y[j]);
    }
    double right_min = y[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      if (y[j] > y[i]) break;
      right_min = std::min(right_min, y[j]);
    }
    if (y[i] - std::max(left_min, right_min) >= prominence) peaks.push_back(i);
  }
  return peaks;
}

namespace {

// Trapezoid time average and half range of y on samples [lo, hi].
OscillationAverage window_average(std::span<const double> t, std::span<const double> y, std::size_t lo,
                                  std::size_t hi) {
  OscillationAverage avg;
  avg.t_begin = t[lo];
  avg.t_end = t[hi];
  double lo_y = y[lo];
  double hi_y = y[lo];
  for (std::size_t i = lo; i <= hi; ++i) {
    lo_y = std::min(lo_y, y[i]);
    hi_y = std::max(hi_y, y[i]);
  }
  avg.amplitude = 0.5 * (hi_y - lo_y);
  if (hi == lo) {
    avg.mean = y[lo];
    return avg;
  }
  double integral = 0.0;
  for (std::size_t i = lo; i < hi; ++i) integral += 0.5 * (y[i] + y[i + 1]) * (t[i + 1] - t[i]);
  avg.mean = integral / (t[hi] - t[lo]);
  return avg;
}

// Drops leading samples where the trace is undefined (NaN).
std::size_t first_defined(std::span<const double> y) {
  std::size_t i = 0;
  while (i < y.size() && std::isnan(y[i])) ++i;
  return i;
}

}  // namespace

OscillationAverage average_over_periods(std::span<const double> t, std::span<const double> y, double prominence) {
  if (t.size() != y.size() || t.empty()) throw DomainError("average_over_periods: empty or mismatched trace");
  const std::size_t start = first_defined(y);
  if (start == y.size()) return {std::numeric_limits<double>::quiet_NaN(), 0.0, t.front(), t.back(), 0, false};
  const auto ts = t.subspan(start);
  const auto ys = y.subspan(start);
  const auto peaks = find_maxima(ys, prominence);
  if (peaks.size() < 2) {
    auto avg = window_average(ts, ys, 0, ys.size() - 1);
    avg.resolved = false;
    return avg;
  }
  auto avg = window_average(ts, ys, peaks.front(), peaks.back());
  avg.periods = static_cast<int>(peaks.size() - 1);
  avg.resolved = true;
  return avg;
}

OscillationAverage average_last_period(std::span<const double> t, std::span<const double> y, double prominence,
                                       std::optional<double> around) {
  if (t.size() != y.size() || t.empty()) throw DomainError("average_last_period: empty or mismatched trace");
  const std::size_t start = first_defined(y);
  if (start == y.size()) return {std::numeric_limits<double>::quiet_NaN(), 0.0, t.front(), t.back(), 0, false};
  const auto ts = t.subspan(start);
  const auto ys = y.subspan(start);
  const auto peaks = find_maxima(ys, prominence);
  if (peaks.size() >= 2) {
    if (!around) {
      auto avg = window_average(ts, ys, peaks[peaks.size() - 2], peaks.back());
      avg.periods = 1;
      avg.resolved = true;
      return avg;
    }
    for (std::size_t p = 0; p + 1 < peaks.size(); ++p) {
      if (ts[peaks[p]] <= *around && *around < ts[peaks[p + 1]]) {
        auto avg = window_average(ts, ys, peaks[p], peaks[p + 1]);
        avg.periods = 1;
        avg.resolved = true;
        return avg;
      }
    }
  }
  const std::size_t n = ys.size();
  const std::size_t lo = n - std::max<std::size_t>(1, n / 5);
  auto avg = window_average(ts, ys, std::min(lo, n - 1), n - 1);
  avg.resolved = false;
  return avg;
}

namespace {

std::vector<double> column(const ResultSeries& s, auto&& get) {
  std::vector<double> out;
  out.reserve(s.records.size());
  for (const auto& r : s.records) out.push_back(get(r));
  return out;
}

double or_nan(const std::optional<double>& v) { return v.value_or(std::numeric_limits<double>::quiet_NaN()); }

void append(ResultSeries& into, ResultSeries&& tail, double offset) {
  bool skip_first = !into.records.empty();
  for (auto& r : tail.records) {
    if (skip_first) {
      skip_first = false;
      continue;
    }
    r.t += offset;
    into.records.push_back(std::move(r));
  }
  into.final_state = std::move(tail.final_state);
  into.final_state.time += offset;
  into.diagnostics.steps += tail.diagnostics.steps;
  into.diagnostics.substeps += tail.diagnostics.substeps;
  into.diagnostics.max_norm_drift = std::max(into.diagnostics.max_norm_drift, tail.diagnostics.max_norm_drift);
}

}  // namespace

SweepResult run_sweep(const LadderSystem& system, const StateVector& initial, SweepDirection direction,
                      const SweepOptions& options, const PropagationSettings& settings) {
  if (!(options.rate > 0.0)) throw ConfigError("sweep rate |alpha| must be positive");
  if (!(options.bias_magnitude > 0.0)) throw ConfigError("|Delta0| must be positive");
  if (options.hold_periods < 1 || options.samples_per_period < 4) throw ConfigError("hold window too coarse");

  SweepResult result;
  result.direction = direction;
  const double sign = direction == SweepDirection::Inverse ? 1.0 : -1.0;
  result.rate = sign * options.rate;
  result.inverse_rate = 2.0 * std::numbers::pi / options.rate;
  result.rescale = options.rescale.value_or(default_rescale(result.inverse_rate));

  const auto schedule = BiasSchedule::sweep(-sign * options.bias_magnitude, result.rate, result.rescale);
  const auto sampler = make_sampler(system, options.sampling);
  result.series = evolve_schedule(initial, system.hamiltonian, schedule, settings, sampler);
  result.at_sweep_end = result.series.records.back();

  const double end_bias = schedule.end_bias();
  const double period = rung_period(end_bias);
  PropagationSettings hold_settings = settings;
  hold_settings.dt = period / options.samples_per_period;
  hold_settings.sample_stride = 1;
  const auto hold = BiasSchedule::hold(end_bias, options.hold_periods * period);
  auto tail = evolve_schedule(result.series.final_state, system.hamiltonian, hold, hold_settings, sampler);
  const double sweep_end = schedule.duration();
  const std::size_t hold_begin = result.series.records.size() - 1;
  append(result.series, std::move(tail), sweep_end);

  const auto all_t = column(result.series, [](const auto& r) { return r.t; });
  const auto all_n = column(result.series, [](const auto& r) { return r.n_right; });
  const std::span<const double> t(all_t.begin() + static_cast<std::ptrdiff_t>(hold_begin), all_t.end());
  const std::span<const double> n(all_n.begin() + static_cast<std::ptrdiff_t>(hold_begin), all_n.end());
  const auto avg = average_over_periods(t, n, options.prominence);
  result.transfer = avg.mean;
  result.amplitude = avg.amplitude;
  result.periods = avg.periods;
  result.resolved = avg.resolved;
  return result;
}

QuenchResult run_quench(const LadderSystem& system, const StateVector& initial, const QuenchOptions& options,
                        const PropagationSettings& settings) {
  QuenchResult result;
  result.final_bias = options.final_bias;
  result.boundary_time =
      system.params.leg_hopping > 0.0 ? system.rungs() / (2.0 * system.params.leg_hopping)
                                      : std::numeric_limits<double>::infinity();
  const auto schedule = BiasSchedule::quench(options.final_bias, options.duration);
  result.series = evolve_schedule(initial, system.hamiltonian, schedule, settings, make_sampler(system, options.sampling));
  result.energy = result.series.records.front().energy;
  result.energy_drift = result.series.diagnostics.energy_drift;

  std::optional<double> around;
  if (system.density() <= options.low_density_threshold && std::isfinite(result.boundary_time)) {
    result.low_density_rule = true;
    around = 0.7 * result.boundary_time;
  }
  const auto t = column(result.series, [](const auto& r) { return r.t; });
  const auto n = column(result.series, [](const auto& r) { return r.n_right; });
  result.n_right = average_last_period(t, n, options.prominence, around);
  if (options.sampling.momentum) {
    const auto kl = column(result.series, [](const auto& r) { return or_nan(r.k2_left); });
    const auto kr = column(result.series, [](const auto& r) { return or_nan(r.k2_right); });
    result.k2_left = average_last_period(t, kl, options.prominence, around);
    result.k2_right = average_last_period(t, kr, options.prominence, around);
  }
  return result;
}

namespace {

template <typename Result, typename Job>
std::vector<ScanRow<Result>> run_rows(std::span<const double> parameters, int threads, Job&& job,
                                      const RowCallback<Result>& on_row) {
  std::vector<ScanRow<Result>> rows(parameters.size());
  const auto count = static_cast<std::ptrdiff_t>(parameters.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(threads, 1))
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    rows[i].parameter = parameters[i];
    try {
      rows[i].result = job(parameters[i]);
    } catch (const std::exception& e) {
      rows[i].error = e.what();
    }
    if (on_row) {
#pragma omp critical(ladder_scan_row)
      on_row(static_cast<std::size_t>(i), rows[i]);
    }
  }
  return rows;
}

}  // namespace

RateScan rate_scan(const LadderSystem& system, const StateVector& initial, SweepDirection direction,
                   std::span<const double> rates, const RescalePolicy& policy, const SweepOptions& base,
                   const PropagationSettings& settings, int threads, const RowCallback<SweepResult>& on_row) {
  for (std::size_t i = 0; i < rates.size(); ++i) {
    if (!(rates[i] > 0.0)) throw ConfigError("rate_scan: rates must be positive");
    if (i > 0 && !(rates[i] > rates[i - 1])) throw ConfigError("rate_scan: rates must be strictly ascending");
  }
  RateScan scan;
  scan.rows = run_rows<SweepResult>(rates, threads, [&](double rate) {
    SweepOptions options = base;
    options.rate = rate;
    options.rescale = policy(2.0 * std::numbers::pi / rate);
    return run_sweep(system, initial, direction, options, settings);
  }, on_row);
  for (std::size_t i = 0; i < scan.rows.size(); ++i) {
    if (!scan.rows[i].result) continue;
    if (!scan.best || scan.rows[i].result->transfer > scan.rows[*scan.best].result->transfer) scan.best = i;
  }
  return scan;
}

std::vector<ScanRow<QuenchResult>> quench_scan(const LadderSystem& system, const StateVector& initial,
                                               std::span<const double> final_biases, const QuenchOptions& base,
                                               const PropagationSettings& settings, int threads,
                                               const RowCallback<QuenchResult>& on_row) {
  return run_rows<QuenchResult>(final_biases, threads, [&](double bias) {
    QuenchOptions options = base;
    options.final_bias = bias;
    return run_quench(system, initial, options, settings);
  }, on_row);
}

}  // namespace ladder
