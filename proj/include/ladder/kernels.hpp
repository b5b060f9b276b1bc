#pragma once

// Data-parallel inner loops. Every OpenMP kernel has a serial reference
// twin used by the tests; row-partitioned kernels are bitwise identical to
// their serial twin, reductions use a fixed block partition so results do
// not depend on the thread count.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>

namespace ladder::kernels {

using Complex = std::complex<double>;

struct CsrView {
  std::size_t rows;
  const std::size_t* row_ptr;
  const std::uint32_t* cols;
  const double* values;
};

// y = A x + shift * diag .* x   (diag may be empty when shift == 0)
void spmv_serial(const CsrView& a, std::span<const double> diag, double shift, std::span<const Complex> x,
                 std::span<Complex> y);
void spmv_omp(const CsrView& a, std::span<const double> diag, double shift, std::span<const Complex> x,
              std::span<Complex> y);

// Fixed-partition block size for deterministic reductions.
inline constexpr std::size_t kReductionBlock = 4096;

Complex dot_serial(std::span<const Complex> x, std::span<const Complex> y);  // sum conj(x_i) y_i
Complex dot_omp(std::span<const Complex> x, std::span<const Complex> y);
double norm2_omp(std::span<const Complex> x);

// sum_i |x_i|^2 w_i
double weighted_population_omp(std::span<const Complex> x, std::span<const double> w);

// y += a x
void axpy_omp(Complex a, std::span<const Complex> x, std::span<Complex> y);

}  // namespace ladder::kernels
