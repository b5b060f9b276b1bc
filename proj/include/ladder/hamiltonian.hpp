#pragma once

#include <span>
#include <string>
#include <vector>

#include "ladder/fock.hpp"
#include "ladder/sparse.hpp"

namespace ladder {

// Energy unit: the rung (inter-chain) hopping J = 1, hbar = 1.
inline constexpr double kRungHopping = 1.0;

enum class Boundary { Open, Periodic };

std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string& s);

struct HamiltonianParams {
  double leg_hopping = 0.38;  // J_par
  double interaction = 1.58;  // U
  Boundary boundary = Boundary::Open;

  // Throws ConfigError on negative couplings or a periodic chain with L_s < 3.
  void validate(const LadderGeometry& geometry) const;
};

// Hopping (rung and leg, +h.c.) and on-site interaction. Hops into a site
// already at the occupation cap are dropped.
SparseOperator build_static(const HamiltonianParams& params, const FockBasis& basis);

// Diagonal operator counting right-leg particles.
SparseOperator build_bias_generator(const FockBasis& basis);

// H0 + bias * NR. Throws DomainError on dimension mismatch.
SparseOperator assemble(const SparseOperator& static_part, const SparseOperator& bias_generator, double bias);

// H(bias) = H0 + bias * NR kept in factored form; NR is diagonal so the
// bias enters the matrix-vector product as a fused diagonal shift.
class BiasedHamiltonian {
 public:
  BiasedHamiltonian(SparseOperator static_part, SparseOperator bias_generator);
  BiasedHamiltonian(const HamiltonianParams& params, const FockBasis& basis);

  std::size_t dimension() const { return static_part_.dimension(); }
  const SparseOperator& static_part() const { return static_part_; }
  const SparseOperator& bias_generator() const { return bias_generator_; }
  std::span<const double> bias_diagonal() const { return bias_diagonal_; }

  void apply(double bias, std::span<const Complex> x, std::span<Complex> y) const;
  SparseOperator at(double bias) const { return assemble(static_part_, bias_generator_, bias); }

 private:
  SparseOperator static_part_;
  SparseOperator bias_generator_;
  std::vector<double> bias_diagonal_;
};

// H(bias) as a LinearMap, referencing a BiasedHamiltonian.
class BiasedMap final : public LinearMap {
 public:
  BiasedMap(const BiasedHamiltonian& h, double bias) : h_(&h), bias_(bias) {}
  std::size_t dimension() const override { return h_->dimension(); }
  void apply(std::span<const Complex> x, std::span<Complex> y) const override { h_->apply(bias_, x, y); }
  double bias() const { return bias_; }

 private:
  const BiasedHamiltonian* h_;
  double bias_;
};

}  // namespace ladder
