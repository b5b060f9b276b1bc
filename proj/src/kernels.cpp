#include "ladder/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <vector>

namespace ladder::kernels {

namespace {

inline Complex row_product(const CsrView& a, std::size_t i, const Complex* x) {
  Complex sum = 0.0;
  for (std::size_t p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) sum += a.values[p] * x[a.cols[p]];
  return sum;
}

std::size_t num_blocks(std::size_t n) { return (n + kReductionBlock - 1) / kReductionBlock; }

}  // namespace

void spmv_serial(const CsrView& a, std::span<const double> diag, double shift, std::span<const Complex> x,
                 std::span<Complex> y) {
  const bool shifted = shift != 0.0 && !diag.empty();
  for (std::size_t i = 0; i < a.rows; ++i) {
    Complex sum = row_product(a, i, x.data());
    if (shifted) sum += shift * diag[i] * x[i];
    y[i] = sum;
  }
}

void spmv_omp(const CsrView& a, std::span<const double> diag, double shift, std::span<const Complex> x,
              std::span<Complex> y) {
  const bool shifted = shift != 0.0 && !diag.empty();
  const auto rows = static_cast<std::ptrdiff_t>(a.rows);
#pragma omp parallel for schedule(static) if (rows > 2048)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    Complex sum = row_product(a, static_cast<std::size_t>(i), x.data());
    if (shifted) sum += shift * diag[i] * x[i];
    y[i] = sum;
  }
}

Complex dot_serial(std::span<const Complex> x, std::span<const Complex> y) {
  Complex sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += std::conj(x[i]) * y[i];
  return sum;
}

Complex dot_omp(std::span<const Complex> x, std::span<const Complex> y) {
  const std::size_t n = x.size();
  const auto blocks = static_cast<std::ptrdiff_t>(num_blocks(n));
  std::vector<Complex> partial(blocks);
#pragma omp parallel for schedule(static) if (blocks > 1)
  for (std::ptrdiff_t b = 0; b < blocks; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kReductionBlock;
    const std::size_t hi = std::min(n, lo + kReductionBlock);
    Complex sum = 0.0;
    for (std::size_t i = lo; i < hi; ++i) sum += std::conj(x[i]) * y[i];
    partial[b] = sum;
  }
  Complex total = 0.0;
  for (const auto& p : partial) total += p;
  return total;
}

double weighted_population_omp(std::span<const Complex> x, std::span<const double> w) {
  const std::size_t n = x.size();
  const auto blocks = static_cast<std::ptrdiff_t>(num_blocks(n));
  std::vector<double> partial(blocks);
#pragma omp parallel for schedule(static) if (blocks > 1)
  for (std::ptrdiff_t b = 0; b < blocks; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kReductionBlock;
    const std::size_t hi = std::min(n, lo + kReductionBlock);
    double sum = 0.0;
    for (std::size_t i = lo; i < hi; ++i) sum += std::norm(x[i]) * w[i];
    partial[b] = sum;
  }
  double total = 0.0;
  for (const double p : partial) total += p;
  return total;
}

double norm2_omp(std::span<const Complex> x) { return std::sqrt(dot_omp(x, x).real()); }

void axpy_omp(Complex a, std::span<const Complex> x, std::span<Complex> y) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static) if (n > 8192)
  for (std::ptrdiff_t i = 0; i < n; ++i) y[i] += a * x[i];
}

}  // namespace ladder::kernels
