#pragma once

#include <cstdint>
#include <functional>

#include "ladder/hamiltonian.hpp"
#include "ladder/observables.hpp"
#include "ladder/schedule.hpp"
#include "ladder/sparse.hpp"
#include "ladder/state.hpp"

namespace ladder {

struct PropagationSettings {
  double dt = 0.02;              // base step
  int krylov_dim = 30;           // maximum Krylov subspace size
  double step_tol = 1e-10;       // local error bound per step (2-norm)
  double dt_min = 1e-9;          // smallest admissible sub-step
  double max_bias_step = 0.05;   // sweep steps are shortened so |alpha| dt <= this
  int sample_stride = 5;         // observer called every stride steps
  double max_time = 1e4;

  void validate() const;
};

struct GroundState {
  double energy = 0.0;
  StateVector state;
  double residual = 0.0;
  int restarts = 0;
};

// Restarted Lanczos with full reorthogonalization, started from a
// pseudo-random vector fixed by `seed`. Throws NumericalError when the
// residual ||H psi - E psi|| stays above `tol` after `max_restarts`.
GroundState ground_state(const LinearMap& h, double tol = 1e-10, std::uint64_t seed = 1234, int krylov_dim = 80,
                         int max_restarts = 200);

struct StepReport {
  int substeps = 1;
  double error_estimate = 0.0;
};

// psi <- exp(-i H dt) psi by Lanczos exponentiation. If the a posteriori
// error of one subspace exceeds settings.step_tol the step is split;
// sub-steps below settings.dt_min raise NumericalError. The state is never
// renormalized.
StepReport evolve_step(StateVector& psi, const LinearMap& h, double dt, const PropagationSettings& settings);

// Records one observable sample; called with the current bias.
using ObservableSampler = std::function<ObservableRecord(double t, double bias, const StateVector& psi)>;

// Integrates the schedule with the exponential midpoint rule: each step uses
// H(Delta(t + dt/2)). Samples at t = 0, every settings.sample_stride steps
// and at the end of the schedule.
ResultSeries evolve_schedule(const StateVector& psi0, const BiasedHamiltonian& h, const BiasSchedule& schedule,
                             const PropagationSettings& settings, const ObservableSampler& sampler);

}  // namespace ladder
