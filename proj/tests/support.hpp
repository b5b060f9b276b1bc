#pragma once

// Independent reference implementations used by the unit and acceptance
// tests. Nothing here goes through the library's rank hash or CSR builder.

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "ladder/hamiltonian.hpp"
#include "ladder/sparse.hpp"
#include "ladder/state.hpp"

namespace oracle {

using Occ = std::vector<int>;

// Every occupation vector on `sites` sites with total N and at most `cap`
// per site, by exhaustive enumeration of all (cap+1)^sites vectors.
std::vector<Occ> brute_force_states(int sites, int particles, int cap);

// Neighbour pairs (i, j), i < j, of the ladder: rungs, then legs.
std::vector<std::pair<int, int>> bonds(int rungs, ladder::Boundary boundary);

// Dense H(bias) on `states` from the textbook definition
//   -J sum_rungs (b+_L b_R + h.c.) - J_par sum_legs (b+_i b_j + h.c.)
//   + U/2 sum n(n-1) + bias sum_i n_{i,R}
Eigen::MatrixXd dense_hamiltonian(const std::vector<Occ>& states, int rungs, const ladder::HamiltonianParams& p,
                                  double bias);

// <b+_{m} b_{s}> between the rungs of one leg, applying the operators to
// occupation vectors directly and looking states up in a std::map.
Eigen::MatrixXcd obdm(const std::vector<Occ>& states, const std::vector<ladder::Complex>& psi, int rungs,
                      int leg, int cap);

Eigen::MatrixXd to_dense(const ladder::SparseOperator& op);

// exp(-i H t) psi by full diagonalization.
Eigen::VectorXcd evolve(const Eigen::MatrixXd& h, const Eigen::VectorXcd& psi, double t);

Eigen::VectorXcd to_eigen(const ladder::StateVector& psi);

}  // namespace oracle
