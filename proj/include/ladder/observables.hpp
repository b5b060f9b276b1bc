#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <vector>

#include "ladder/fock.hpp"
#include "ladder/sparse.hpp"
#include "ladder/state.hpp"

namespace ladder {

// Uniform quasi-momentum grid k_j = -pi + 2*pi*j/K, j = 0..K-1, in units of
// the inverse lattice constant. Distributions are periodic in k, so the
// point at -pi doubles as +pi.
struct MomentumGrid {
  int points = 64;

  static MomentumGrid for_rungs(int rungs, int points_per_site = 16) { return {points_per_site * rungs}; }
  double spacing() const;
  double k(int j) const;
};

// b^dag_{create} b_{annihilate} on the basis; hops into a capped site are
// dropped, as in the Hamiltonian.
SparseOperator hopping_operator(const FockBasis& basis, int create_site, int annihilate_site);

// Fraction of particles on the right leg, N^-1 sum_i <n_{i,R}>.
double leg_population(const StateVector& psi, const FockBasis& basis);

// <b^dag_{m,leg} b_{s,leg}> over the rungs of one leg, L_s x L_s Hermitian.
Eigen::MatrixXcd one_body_density_matrix(const StateVector& psi, const FockBasis& basis, Leg leg);
// Single-threaded reference of the above.
Eigen::MatrixXcd one_body_density_matrix_serial(const StateVector& psi, const FockBasis& basis, Leg leg);

// n_k = L_s^-1 sum_{m,s} exp(-i k (m - s)) G_{ms} on `grid`. Values within
// -1e-10 of zero are clamped; anything more negative throws DomainError.
std::vector<double> momentum_distribution(const Eigen::MatrixXcd& g, const MomentumGrid& grid);

// Normalized second moment sum k^2 n_k / sum n_k with trapezoid weights on
// the closed interval [-pi, pi]. Empty distribution -> nullopt.
std::optional<double> momentum_width(std::span<const double> nk, const MomentumGrid& grid);

// (L_s / 2 pi) * integral n_k dk under the grid quadrature; equals trace(G).
double momentum_sum(std::span<const double> nk, const MomentumGrid& grid, int rungs);

enum class CutKind { Legs, Rungs };

// Legs: subsystem A is the whole left leg. Rungs: A is rungs [0, rungs_in_a)
// on both legs.
struct Bipartition {
  CutKind kind = CutKind::Legs;
  int rungs_in_a = 0;
};

// Von Neumann entropy of the reduced density matrix of subsystem A.
double entanglement_entropy(const StateVector& psi, const FockBasis& basis, Bipartition cut);

struct ObservableRecord {
  double t = 0.0;
  double bias = 0.0;
  double n_right = 0.0;
  std::vector<double> nk_left;
  std::vector<double> nk_right;
  std::optional<double> k2_left;
  std::optional<double> k2_right;
  double energy = 0.0;
  std::optional<double> entropy;
  double norm = 1.0;
};

struct SeriesDiagnostics {
  std::size_t steps = 0;
  std::size_t substeps = 0;  // extra Krylov steps forced by the error control
  double max_norm_drift = 0.0;
  double energy_drift = 0.0;  // max relative deviation from the first sample
};

struct ResultSeries {
  std::vector<ObservableRecord> records;
  StateVector final_state;
  SeriesDiagnostics diagnostics;
};

}  // namespace ladder
