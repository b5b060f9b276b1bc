#pragma once

#include <span>
#include <vector>

#include "ladder/sparse.hpp"

namespace ladder {

// Many-body wavefunction in a FockBasis; time in units of hbar/J.
struct StateVector {
  std::vector<Complex> amplitudes;
  double time = 0.0;

  std::size_t dimension() const { return amplitudes.size(); }
  double norm() const;
  std::span<const Complex> view() const { return amplitudes; }
};

// |<a|b>|
double fidelity(const StateVector& a, const StateVector& b);

}  // namespace ladder
