#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ladder/errors.hpp"
#include "ladder/hamiltonian.hpp"
#include "support.hpp"

using namespace ladder;

namespace {

// Dense oracle reordered into the basis ordering.
Eigen::MatrixXd oracle_in_basis(const FockBasis& basis, const HamiltonianParams& p, double bias) {
  const int rungs = basis.geometry().rungs;
  const auto states = oracle::brute_force_states(2 * rungs, basis.particles(), basis.max_occupation());
  const auto h = oracle::dense_hamiltonian(states, rungs, p, bias);
  std::vector<std::size_t> perm(states.size());
  for (std::size_t a = 0; a < states.size(); ++a) {
    FockState s(states[a].begin(), states[a].end());
    perm[a] = basis.index_of(s);
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(h.rows(), h.cols());
  for (Eigen::Index a = 0; a < h.rows(); ++a)
    for (Eigen::Index b = 0; b < h.cols(); ++b) out(perm[a], perm[b]) = h(a, b);
  return out;
}

}  // namespace

TEST_CASE("sparse Hamiltonian equals the naive dense construction exactly") {
  HamiltonianParams p;
  for (int rungs = 1; rungs <= 2; ++rungs) {
    for (int n = 1; n <= 2; ++n) {
      const FockBasis basis(LadderGeometry{rungs}, n, n);
      const BiasedHamiltonian h(p, basis);
      for (double bias : {0.0, 1.25, -7.5}) {
        const auto sparse = oracle::to_dense(h.at(bias));
        const auto dense = oracle_in_basis(basis, p, bias);
        CAPTURE(rungs);
        CAPTURE(n);
        CHECK((sparse - dense).cwiseAbs().maxCoeff() == 0.0);
      }
    }
  }
}

TEST_CASE("capped and periodic Hamiltonians match the oracle") {
  HamiltonianParams p;
  p.leg_hopping = 0.7;
  p.interaction = 2.3;
  for (auto bc : {Boundary::Open, Boundary::Periodic}) {
    p.boundary = bc;
    const FockBasis basis(LadderGeometry{3}, 4, 2);
    const BiasedHamiltonian h(p, basis);
    const Eigen::MatrixXd diff = oracle::to_dense(h.at(0.9)) - oracle_in_basis(basis, p, 0.9);
    CHECK(diff.cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("Hamiltonian is symmetric and the bias generator counts right-leg bosons") {
  const FockBasis basis(LadderGeometry{3}, 3, 3);
  const BiasedHamiltonian h(HamiltonianParams{}, basis);
  CHECK(h.static_part().is_symmetric());
  for (std::size_t i = 0; i < basis.dimension(); ++i) CHECK(h.bias_generator().at(i, i) == basis.right_count(i));
}

TEST_CASE("fused bias shift equals the assembled operator") {
  const FockBasis basis(LadderGeometry{2}, 3, 3);
  const BiasedHamiltonian h(HamiltonianParams{}, basis);
  std::vector<Complex> x(basis.dimension()), y1(x.size()), y2(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = Complex(std::sin(1.0 + i), std::cos(2.0 * i));
  h.apply(3.5, x, y1);
  h.at(3.5).apply(x, y2);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(y1[i] - y2[i]) < 1e-13);
}

TEST_CASE("single rung, single particle is the two-level LZ matrix") {
  const FockBasis basis(LadderGeometry{1}, 1, 1);
  const auto h = oracle::to_dense(BiasedHamiltonian(HamiltonianParams{}, basis).at(2.0));
  // |1,0> then |0,1>
  CHECK(h(0, 0) == 0.0);
  CHECK(h(1, 1) == 2.0);
  CHECK(h(0, 1) == -1.0);
  CHECK(h(1, 0) == -1.0);
}

TEST_CASE("parameter validation") {
  HamiltonianParams p;
  p.boundary = Boundary::Periodic;
  CHECK_THROWS_AS(p.validate(LadderGeometry{2}), ConfigError);
  CHECK_NOTHROW(p.validate(LadderGeometry{3}));
  p.boundary = Boundary::Open;
  p.leg_hopping = -0.1;
  CHECK_THROWS_AS(p.validate(LadderGeometry{3}), ConfigError);
  CHECK(boundary_from_string("periodic") == Boundary::Periodic);
  CHECK_THROWS_AS(boundary_from_string("twisted"), ConfigError);
}
