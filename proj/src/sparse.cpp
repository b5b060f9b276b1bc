#include "ladder/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ladder/errors.hpp"
#include "ladder/kernels.hpp"

namespace ladder {

SparseOperator SparseOperator::from_triplets(std::size_t dimension, std::vector<Triplet> triplets, bool hermitian) {
  if (dimension > std::numeric_limits<std::uint32_t>::max()) throw ConfigError("operator dimension too large");
  for (const auto& t : triplets) {
    if (t.row >= dimension || t.col >= dimension) throw DomainError("triplet index out of range");
  }
  std::sort(triplets.begin(), triplets.end(),
            [](const Triplet& a, const Triplet& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });

  SparseOperator op;
  op.dimension_ = dimension;
  op.hermitian_ = hermitian;
  op.row_ptr_.assign(dimension + 1, 0);
  op.cols_.reserve(triplets.size());
  op.values_.reserve(triplets.size());
  for (std::size_t k = 0; k < triplets.size();) {
    const std::size_t row = triplets[k].row;
    const std::size_t col = triplets[k].col;
    double value = 0.0;
    for (; k < triplets.size() && triplets[k].row == row && triplets[k].col == col; ++k) value += triplets[k].value;
    if (value == 0.0) continue;
    op.cols_.push_back(static_cast<std::uint32_t>(col));
    op.values_.push_back(value);
    ++op.row_ptr_[row + 1];
  }
  for (std::size_t i = 0; i < dimension; ++i) op.row_ptr_[i + 1] += op.row_ptr_[i];
  return op;
}

SparseOperator SparseOperator::diagonal(std::span<const double> values) {
  std::vector<Triplet> triplets;
  triplets.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) triplets.push_back({i, i, values[i]});
  return from_triplets(values.size(), std::move(triplets), true);
}

double SparseOperator::at(std::size_t row, std::size_t col) const {
  const auto begin = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row]);
  const auto end = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row + 1]);
  const auto it = std::lower_bound(begin, end, static_cast<std::uint32_t>(col));
  if (it == end || *it != col) return 0.0;
  return values_[static_cast<std::size_t>(it - cols_.begin())];
}

std::vector<double> SparseOperator::diagonal_values() const {
  std::vector<double> d(dimension_);
  for (std::size_t i = 0; i < dimension_; ++i) d[i] = at(i, i);
  return d;
}

double SparseOperator::max_abs() const {
  double m = 0.0;
  for (const double v : values_) m = std::max(m, std::abs(v));
  return m;
}

void SparseOperator::apply(std::span<const Complex> x, std::span<Complex> y) const {
  if (x.size() != dimension_ || y.size() != dimension_) throw DomainError("vector length does not match operator");
  const kernels::CsrView view{dimension_, row_ptr_.data(), cols_.data(), values_.data()};
  kernels::spmv_omp(view, {}, 0.0, x, y);
}

bool SparseOperator::is_symmetric() const {
  for (std::size_t i = 0; i < dimension_; ++i) {
    for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      if (at(cols_[p], i) != values_[p]) return false;
    }
  }
  return true;
}

}  // namespace ladder
