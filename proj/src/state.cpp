#include "ladder/state.hpp"

#include <cmath>

#include "ladder/errors.hpp"
#include "ladder/kernels.hpp"

namespace ladder {

double StateVector::norm() const { return kernels::norm2_omp(amplitudes); }

double fidelity(const StateVector& a, const StateVector& b) {
  if (a.dimension() != b.dimension()) throw DomainError("fidelity: dimension mismatch");
  return std::abs(kernels::dot_omp(a.amplitudes, b.amplitudes));
}

}  // namespace ladder
