#pragma once

#include <vector>

#include "ladder/propagator.hpp"
#include "ladder/protocols.hpp"

// Landau-Zener sweeps of n interacting bosons in one double well (a ladder
// with a single rung). Rates are |alpha| > 0 in units of J^2.
namespace ladder::doublewell {

// Two-level transfer probability 1 - exp(-2 pi / alpha).
double p_lz(double rate);

// Probability to cross the resonance |n-j, j> <-> |n-j-1, j+1> diabatically,
// exp(-2 pi (n-j)(j+1) / alpha).
double gs_diabatic(int n, int j, double rate);

// Ground-state sweep transfer for U >> n: independent first-order
// resonances, prod_j [1 - (n-j)/n p_{n,j}].
double gs_transfer(int n, double rate);

// Leading-order coupling of the order-nu resonance |n,0> -> |n-nu,nu>:
// U^{1-nu} nu/(nu-1)! sqrt(C(n, nu)).
double coupling(int n, int order, double interaction);

struct Resonance {
  int order = 1;
  double coupling = 0.0;
  double diabatic = 0.0;  // exp(-2 pi J^2 / alpha)
};

// Resonances met by |n,0> along an inverse sweep, highest order first.
struct ResonanceCascade {
  int particles = 0;
  double interaction = 0.0;
  std::vector<Resonance> resonances;
};

ResonanceCascade inverse_cascade(int n, double rate, double interaction);

// Inverse-sweep transfer for U >> 1:
// 1 - (1/n) sum_{mu=0}^{n-1} prod_{nu=n-mu}^{n} p_n^{(nu)}.
double inverse_transfer(int n, double rate, double interaction);

struct IntegrationOptions {
  double bias_magnitude = 60.0;  // |Delta0|, no rescaling
  int hold_periods = 5;
  int samples_per_period = 32;
};

// Exact transfer from propagating the (n+1)-dimensional double well through
// the sweep and averaging over the hold window.
double integrate_doublewell(int n, double interaction, double rate, SweepDirection direction,
                            const IntegrationOptions& options, const PropagationSettings& settings);

}  // namespace ladder::doublewell
