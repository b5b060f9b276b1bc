#include "ladder/hamiltonian.hpp"

#include <cmath>
#include <utility>

#include "ladder/errors.hpp"
#include "ladder/kernels.hpp"

namespace ladder {

std::string to_string(Boundary b) { return b == Boundary::Open ? "open" : "periodic"; }

Boundary boundary_from_string(const std::string& s) {
  if (s == "open") return Boundary::Open;
  if (s == "periodic") return Boundary::Periodic;
  throw ConfigError("boundary must be 'open' or 'periodic', got '" + s + "'");
}

void HamiltonianParams::validate(const LadderGeometry& geometry) const {
  if (!(leg_hopping >= 0.0)) throw ConfigError("J_par must be non-negative");
  if (!(interaction >= 0.0)) throw ConfigError("U must be non-negative");
  if (boundary == Boundary::Periodic && geometry.rungs < 3) {
    throw ConfigError("periodic legs need L_s >= 3 (shorter rings double-count bonds)");
  }
}

namespace {

struct Bond {
  int from;
  int to;
  double amplitude;  // coefficient of b^dag_from b_to (and h.c.)
};

std::vector<Bond> ladder_bonds(const HamiltonianParams& params, const LadderGeometry& g) {
  std::vector<Bond> bonds;
  for (int i = 0; i < g.rungs; ++i) {
    bonds.push_back({g.site(Leg::Left, i), g.site(Leg::Right, i), -kRungHopping});
  }
  if (params.leg_hopping != 0.0) {
    const int last = params.boundary == Boundary::Periodic ? g.rungs : g.rungs - 1;
    for (const Leg leg : {Leg::Left, Leg::Right}) {
      for (int i = 0; i < last; ++i) {
        bonds.push_back({g.site(leg, i), g.site(leg, (i + 1) % g.rungs), -params.leg_hopping});
      }
    }
  }
  return bonds;
}

}  // namespace

SparseOperator build_static(const HamiltonianParams& params, const FockBasis& basis) {
  params.validate(basis.geometry());
  const auto bonds = ladder_bonds(params, basis.geometry());
  const int cap = basis.max_occupation();
  const std::size_t dim = basis.dimension();

  std::vector<Triplet> triplets;
  triplets.reserve(dim * (1 + 2 * bonds.size()));
  FockState work(basis.num_sites());
  for (std::size_t j = 0; j < dim; ++j) {
    const auto state = basis.state(j);
    double onsite = 0.0;
    for (const auto n : state) onsite += 0.5 * params.interaction * n * (n - 1);
    triplets.push_back({j, j, onsite});

    // Both directions of every bond: the matrix is filled column by column
    // and ends up symmetric by construction.
    for (const auto& bond : bonds) {
      for (const auto& [dst, src] : {std::pair{bond.from, bond.to}, std::pair{bond.to, bond.from}}) {
        const int n_src = state[src];
        const int n_dst = state[dst];
        if (n_src == 0 || n_dst == cap) continue;
        std::copy(state.begin(), state.end(), work.begin());
        --work[src];
        ++work[dst];
        const auto i = basis.find(work);
        const double amp = bond.amplitude * std::sqrt(static_cast<double>((n_dst + 1) * n_src));
        triplets.push_back({*i, j, amp});
      }
    }
  }
  return SparseOperator::from_triplets(dim, std::move(triplets), true);
}

SparseOperator build_bias_generator(const FockBasis& basis) {
  std::vector<double> counts(basis.dimension());
  for (std::size_t j = 0; j < counts.size(); ++j) counts[j] = basis.right_count(j);
  return SparseOperator::diagonal(counts);
}

SparseOperator assemble(const SparseOperator& static_part, const SparseOperator& bias_generator, double bias) {
  if (static_part.dimension() != bias_generator.dimension()) {
    throw DomainError("assemble: H0 and NR dimensions differ");
  }
  std::vector<Triplet> triplets;
  triplets.reserve(static_part.nnz() + bias_generator.nnz());
  for (const auto* op : {&static_part, &bias_generator}) {
    const double scale = op == &static_part ? 1.0 : bias;
    const auto rp = op->row_ptr();
    const auto cols = op->cols();
    const auto vals = op->values();
    for (std::size_t i = 0; i < op->dimension(); ++i) {
      for (std::size_t p = rp[i]; p < rp[i + 1]; ++p) triplets.push_back({i, cols[p], scale * vals[p]});
    }
  }
  return SparseOperator::from_triplets(static_part.dimension(), std::move(triplets),
                                       static_part.hermitian() && bias_generator.hermitian());
}

BiasedHamiltonian::BiasedHamiltonian(SparseOperator static_part, SparseOperator bias_generator)
    : static_part_(std::move(static_part)), bias_generator_(std::move(bias_generator)) {
  if (static_part_.dimension() != bias_generator_.dimension()) {
    throw DomainError("BiasedHamiltonian: H0 and NR dimensions differ");
  }
  bias_diagonal_ = bias_generator_.diagonal_values();
  for (std::size_t i = 0; i < bias_generator_.dimension(); ++i) {
    if (bias_generator_.row_ptr()[i + 1] - bias_generator_.row_ptr()[i] > 1) {
      throw DomainError("bias generator must be diagonal");
    }
  }
}

BiasedHamiltonian::BiasedHamiltonian(const HamiltonianParams& params, const FockBasis& basis)
    : BiasedHamiltonian(build_static(params, basis), build_bias_generator(basis)) {}

void BiasedHamiltonian::apply(double bias, std::span<const Complex> x, std::span<Complex> y) const {
  if (x.size() != dimension() || y.size() != dimension()) throw DomainError("vector length does not match operator");
  const kernels::CsrView view{static_part_.dimension(), static_part_.row_ptr().data(), static_part_.cols().data(),
                              static_part_.values().data()};
  kernels::spmv_omp(view, bias_diagonal_, bias, x, y);
}

}  // namespace ladder
