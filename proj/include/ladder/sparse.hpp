#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ladder {

using Complex = std::complex<double>;

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

// Real sparse matrix in CSR layout. Couplings of the ladder are real, so
// values are stored as doubles and applied to complex vectors.
class SparseOperator {
 public:
  SparseOperator() = default;

  // Duplicate (row, col) entries are summed; explicit zeros are dropped.
  static SparseOperator from_triplets(std::size_t dimension, std::vector<Triplet> triplets, bool hermitian);
  static SparseOperator diagonal(std::span<const double> values);

  std::size_t dimension() const { return dimension_; }
  std::size_t nnz() const { return values_.size(); }
  bool hermitian() const { return hermitian_; }

  std::span<const std::size_t> row_ptr() const { return row_ptr_; }
  std::span<const std::uint32_t> cols() const { return cols_; }
  std::span<const double> values() const { return values_; }

  // Entry lookup by binary search in the row; zero when absent.
  double at(std::size_t row, std::size_t col) const;
  std::vector<double> diagonal_values() const;
  double max_abs() const;

  // y = A x
  void apply(std::span<const Complex> x, std::span<Complex> y) const;

  // Exact structural check: A(i,j) == A(j,i) for every stored entry.
  bool is_symmetric() const;

 private:
  std::size_t dimension_ = 0;
  bool hermitian_ = false;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::uint32_t> cols_;
  std::vector<double> values_;
};

// Linear map acting on complex state vectors.
class LinearMap {
 public:
  virtual ~LinearMap() = default;
  virtual std::size_t dimension() const = 0;
  virtual void apply(std::span<const Complex> x, std::span<Complex> y) const = 0;
};

// Adapts a SparseOperator to the LinearMap interface without copying.
class SparseMap final : public LinearMap {
 public:
  explicit SparseMap(const SparseOperator& op) : op_(&op) {}
  std::size_t dimension() const override { return op_->dimension(); }
  void apply(std::span<const Complex> x, std::span<Complex> y) const override { op_->apply(x, y); }

 private:
  const SparseOperator* op_;
};

}  // namespace ladder
