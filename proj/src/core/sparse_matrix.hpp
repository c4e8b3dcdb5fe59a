#pragma once

#include <span>
#include <vector>

#include "core/vector_ops.hpp"

namespace feecns {

class SparseMatrix;

/// Accumulates (row, col, value) entries; duplicates are summed on build.
class TripletBuilder {
 public:
  TripletBuilder(int rows, int cols) : rows_(rows), cols_(cols) {}
  void add(int row, int col, double value);
  void reserve(size_t n) { entries_.reserve(n); }
  SparseMatrix build() const;
  int rows() const { return rows_; }
  int cols() const { return cols_; }

 private:
  struct Entry {
    int row, col;
    double value;
  };
  int rows_, cols_;
  std::vector<Entry> entries_;
};

/// Compressed sparse row matrix. Column indices are sorted within each row.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {}

  static SparseMatrix identity(int n);
  static SparseMatrix diagonal(std::span<const double> d);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  size_t nnz() const { return values_.size(); }

  const std::vector<int>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }

  // y = A x
  void apply(std::span<const double> x, std::span<double> y) const;
  Vec apply(std::span<const double> x) const;
  // y = A^T x
  void apply_transpose(std::span<const double> x, std::span<double> y) const;
  Vec apply_transpose(std::span<const double> x) const;

  SparseMatrix transpose() const;
  double coeff(int row, int col) const;
  double max_abs() const;
  std::vector<double> to_dense() const;  // row-major

  SparseMatrix scaled(double s) const;

 private:
  friend class TripletBuilder;
  friend SparseMatrix multiply(const SparseMatrix&, const SparseMatrix&);
  friend SparseMatrix add(const SparseMatrix&, const SparseMatrix&, double, double);

  int rows_ = 0, cols_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b);
// alpha * a + beta * b
SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b, double alpha = 1.0, double beta = 1.0);
// Block diagonal assembly with the given blocks in order.
SparseMatrix block_diagonal(const std::vector<const SparseMatrix*>& blocks);
// Kronecker product; row index of the result is ia * b.rows() + ib.
SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b);

}  // namespace feecns
