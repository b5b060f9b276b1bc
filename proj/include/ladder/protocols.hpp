#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ladder/fock.hpp"
#include "ladder/hamiltonian.hpp"
#include "ladder/observables.hpp"
#include "ladder/propagator.hpp"

namespace ladder {

// Ground-state sweep: Delta0 > 0, alpha < 0. Inverse sweep: Delta0 < 0,
// alpha > 0, so the initially filled left leg starts higher in energy.
enum class SweepDirection { GroundState, Inverse };

std::string to_string(SweepDirection d);
SweepDirection direction_from_string(const std::string& s);

// Basis, Hamiltonian and momentum grid of one ladder.
struct LadderSystem {
  LadderSystem(const HamiltonianParams& params, FockBasis basis, int points_per_site = 16);

  HamiltonianParams params;
  FockBasis basis;
  BiasedHamiltonian hamiltonian;
  MomentumGrid grid;

  int rungs() const { return basis.geometry().rungs; }
  int particles() const { return basis.particles(); }
  double density() const { return static_cast<double>(particles()) / rungs(); }
};

struct SamplingOptions {
  bool momentum = true;
  bool entropy = false;  // leg-cut entanglement entropy
};

ObservableRecord measure(const LadderSystem& system, const StateVector& psi, double t, double bias,
                         const SamplingOptions& sampling);
ObservableSampler make_sampler(const LadderSystem& system, const SamplingOptions& sampling);

// Ground state at a large positive bias: all particles on the left leg.
// initial_bias = +infinity gives the exact limit, the ground state of H0 in
// the sector with an empty right leg.
StateVector initial_state(const LadderSystem& system, double initial_bias = 100.0, std::uint64_t seed = 1234,
                          double tol = 1e-10);

// Eigenstate of H(bias) with the largest overlap with `reference`, by dense
// diagonalization. Meant for few-state systems where a sweep has to start
// on an excited adiabatic level (inverse sweeps of a double well).
StateVector adiabatic_state(const LadderSystem& system, double bias, const StateVector& reference);

// r = 7 below 2pi/alpha = 0.5, r = 2 above 2pi/alpha = 2, linear between.
double default_rescale(double inverse_rate);

// Period of a single particle oscillating on an isolated rung at `bias`.
double rung_period(double bias);

// Time average of a sampled trace over an integer number of oscillation
// periods delimited by local maxima of at least `prominence`.
struct OscillationAverage {
  double mean = 0.0;
  double amplitude = 0.0;  // half the peak-to-peak range inside the window
  double t_begin = 0.0;
  double t_end = 0.0;
  int periods = 0;
  bool resolved = false;  // false: no two maxima, a fallback window was used
};

// Indices of local maxima with topographic prominence >= `prominence`.
std::vector<std::size_t> find_maxima(std::span<const double> y, double prominence);

// Window from the first to the last detected maximum; whole trace if fewer
// than two maxima are found.
OscillationAverage average_over_periods(std::span<const double> t, std::span<const double> y, double prominence);

// Window between the final two maxima or, with `around`, the consecutive
// pair of maxima enclosing that time. Falls back to the last 20% of the
// trace when no such pair exists.
OscillationAverage average_last_period(std::span<const double> t, std::span<const double> y, double prominence,
                                       std::optional<double> around = std::nullopt);

struct SweepOptions {
  double bias_magnitude = 18.2;      // |Delta0| before rescaling
  double rate = 1.0;                 // |alpha|
  std::optional<double> rescale;     // r; default_rescale(2pi/|alpha|) when unset
  int hold_periods = 5;
  int samples_per_period = 32;
  double prominence = 1e-4;
  SamplingOptions sampling;
};

struct SweepResult {
  SweepDirection direction = SweepDirection::Inverse;
  double rate = 0.0;          // signed alpha
  double inverse_rate = 0.0;  // 2 pi / |alpha|
  double rescale = 1.0;
  double transfer = 0.0;      // n_R averaged over the hold window
  double amplitude = 0.0;
  int periods = 0;
  bool resolved = false;
  ObservableRecord at_sweep_end;
  ResultSeries series;  // sweep followed by hold
};

SweepResult run_sweep(const LadderSystem& system, const StateVector& initial, SweepDirection direction,
                      const SweepOptions& options, const PropagationSettings& settings);

struct QuenchOptions {
  double final_bias = 0.0;
  double duration = 30.0;
  double prominence = 1e-4;
  // Densities at or below this use the window around 0.7 T* instead of the
  // trace end.
  double low_density_threshold = 0.75;
  SamplingOptions sampling;
};

struct QuenchResult {
  double final_bias = 0.0;
  OscillationAverage n_right;
  OscillationAverage k2_left;
  OscillationAverage k2_right;
  double energy = 0.0;
  double energy_drift = 0.0;
  double boundary_time = 0.0;  // T* = L_s / (2 J_par)
  bool low_density_rule = false;
  ResultSeries series;
};

QuenchResult run_quench(const LadderSystem& system, const StateVector& initial, const QuenchOptions& options,
                        const PropagationSettings& settings);

struct RescalePolicy {
  std::optional<double> fixed;  // unset: default_rescale
  double operator()(double inverse_rate) const { return fixed ? *fixed : default_rescale(inverse_rate); }
};

template <typename Result>
struct ScanRow {
  double parameter = 0.0;
  std::optional<Result> result;
  std::string error;
};

// Called once per finished row, serialized across workers; lets callers
// persist rows as they complete.
template <typename Result>
using RowCallback = std::function<void(std::size_t index, const ScanRow<Result>& row)>;

struct RateScan {
  std::vector<ScanRow<SweepResult>> rows;  // in input order
  std::optional<std::size_t> best;         // row with the largest transfer
};

// One sweep per |alpha| in `rates` (positive, ascending). Rows run in
// parallel on `threads` workers; a failing row records its error and the
// scan continues.
RateScan rate_scan(const LadderSystem& system, const StateVector& initial, SweepDirection direction,
                   std::span<const double> rates, const RescalePolicy& policy, const SweepOptions& base,
                   const PropagationSettings& settings, int threads = 1,
                   const RowCallback<SweepResult>& on_row = {});

std::vector<ScanRow<QuenchResult>> quench_scan(const LadderSystem& system, const StateVector& initial,
                                               std::span<const double> final_biases, const QuenchOptions& base,
                                               const PropagationSettings& settings, int threads = 1,
                                               const RowCallback<QuenchResult>& on_row = {});

}  // namespace ladder
