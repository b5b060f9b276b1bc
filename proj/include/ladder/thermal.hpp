#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ladder/protocols.hpp"
#include "ladder/sparse.hpp"

namespace ladder {

// Complete eigendecomposition of a Hermitian operator, eigenvalues ascending.
struct Spectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;  // columns

  std::size_t dimension() const { return static_cast<std::size_t>(values.size()); }
};

inline constexpr std::size_t kDefaultDenseCap = 12000;

// Throws ConfigError when the dimension exceeds `dense_cap`.
Spectrum full_spectrum(const SparseOperator& h, std::size_t dense_cap = kDefaultDenseCap);

// Normalized Boltzmann weights exp(-beta E_j) / Z, shifted by the extreme
// eigenvalue so that no exponent is positive.
Eigen::VectorXd boltzmann_weights(const Spectrum& spectrum, double beta);

// <v_j|A|v_j> for every eigenvector.
Eigen::VectorXd eigen_expectations(const Spectrum& spectrum, const SparseOperator& a);

// sum_j w_j(beta) <v_j|A|v_j>. Throws NumericalError on NaN.
double thermal_expectation(const Spectrum& spectrum, double beta, const SparseOperator& a);
double thermal_energy(const Spectrum& spectrum, double beta);

struct BetaMatch {
  double beta = 0.0;
  double energy = 0.0;
  double residual = 0.0;
  bool negative = false;   // E_target above the infinite-temperature energy
  bool saturated = false;  // target within tol of a spectral edge; beta clipped
};

// Bisection on the monotone map beta -> <H>_beta, starting from the bracket
// [-50, 50] and widening it if needed. Throws DomainError when the target
// lies outside [E_min, E_max].
BetaMatch match_beta(const Spectrum& spectrum, double target, double tol = 1e-8);

// Canonical one-body density matrix of one leg, sum_j w_j <v_j|b^dag_m b_s|v_j>.
Eigen::MatrixXcd thermal_one_body_density_matrix(const LadderSystem& system, const Spectrum& spectrum, double beta,
                                                 Leg leg);

struct ThermalPoint {
  double final_bias = 0.0;
  double beta = 0.0;
  double energy = 0.0;
  double n_right = 0.0;
  std::optional<double> k2_left;
  std::optional<double> k2_right;
  bool negative_beta = false;
  bool flagged = false;
  std::string note;
};

// Energy-matched canonical state at bias `final_bias`.
ThermalPoint thermal_point(const LadderSystem& system, double final_bias, double energy, double tol = 1e-8,
                           std::size_t dense_cap = kDefaultDenseCap);

// Quench energy <psi0|H(final_bias)|psi0>.
double quench_energy(const LadderSystem& system, const StateVector& psi0, double final_bias);

// One ThermalPoint per bias. `energies` (same length) supplies the matched
// energies; otherwise they are computed from `initial`. Failed points carry
// `flagged` and the error in `note`.
std::vector<ThermalPoint> thermal_curve(const LadderSystem& system, std::span<const double> final_biases,
                                        std::optional<std::span<const double>> energies, const StateVector& initial,
                                        double tol = 1e-8, std::size_t dense_cap = kDefaultDenseCap,
                                        int threads = 1);

// Single-particle ladder Hamiltonian (2 L_s x 2 L_s, leg-major sites).
Eigen::MatrixXd single_particle_hamiltonian(const HamiltonianParams& params, const LadderGeometry& geometry,
                                            double bias);

// Grand-canonical ideal Bose gas with mean particle number N and mean
// energy `energy`. Occupations f_i = 1 / (exp(beta e_i + gamma) - 1).
struct IdealGasPoint {
  ThermalPoint point;
  double gamma = 0.0;  // -beta mu
  std::vector<double> mode_energies;
  std::vector<double> occupations;
};

IdealGasPoint ideal_gas_point(const HamiltonianParams& params, const LadderGeometry& geometry, int particles,
                              double final_bias, double energy);

// Reference curve at the fixed energy E = -2 J_par N (pass `energy` to override).
std::vector<ThermalPoint> ideal_gas_reference(const HamiltonianParams& params, const LadderGeometry& geometry,
                                              int particles, std::span<const double> final_biases,
                                              std::optional<double> energy = std::nullopt);

}  // namespace ladder
