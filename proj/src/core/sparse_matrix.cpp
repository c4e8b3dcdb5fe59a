#include "core/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/errors.hpp"

namespace feecns {

void TripletBuilder::add(int row, int col, double value) {
  if (row < 0 || row >= rows_ || col < 0 || col >= cols_)
    fail(ErrorCode::InvalidArgument, "triplet index out of range: (" + std::to_string(row) + ", " +
                                         std::to_string(col) + ")");
  entries_.push_back({row, col, value});
}

SparseMatrix TripletBuilder::build() const {
  SparseMatrix m(rows_, cols_);
  std::vector<Entry> sorted(entries_);
  std::sort(sorted.begin(), sorted.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  m.col_idx_.reserve(sorted.size());
  m.values_.reserve(sorted.size());
  for (size_t i = 0; i < sorted.size();) {
    size_t j = i;
    double v = 0.0;
    while (j < sorted.size() && sorted[j].row == sorted[i].row && sorted[j].col == sorted[i].col) {
      v += sorted[j].value;
      ++j;
    }
    m.col_idx_.push_back(sorted[i].col);
    m.values_.push_back(v);
    m.row_ptr_[sorted[i].row + 1]++;
    i = j;
  }
  for (int r = 0; r < rows_; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
  return m;
}

SparseMatrix SparseMatrix::identity(int n) {
  Vec d(n, 1.0);
  return diagonal(d);
}

SparseMatrix SparseMatrix::diagonal(std::span<const double> d) {
  int n = static_cast<int>(d.size());
  SparseMatrix m(n, n);
  m.col_idx_.resize(n);
  m.values_.assign(d.begin(), d.end());
  for (int i = 0; i < n; ++i) {
    m.row_ptr_[i + 1] = i + 1;
    m.col_idx_[i] = i;
  }
  return m;
}

void SparseMatrix::apply(std::span<const double> x, std::span<double> y) const {
  if (static_cast<int>(x.size()) != cols_ || static_cast<int>(y.size()) != rows_)
    fail(ErrorCode::IncompatibleOperands, "sparse apply: dimension mismatch");
  for (int r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += values_[k] * x[col_idx_[k]];
    y[r] = s;
  }
}

Vec SparseMatrix::apply(std::span<const double> x) const {
  Vec y(rows_);
  apply(x, y);
  return y;
}

void SparseMatrix::apply_transpose(std::span<const double> x, std::span<double> y) const {
  if (static_cast<int>(x.size()) != rows_ || static_cast<int>(y.size()) != cols_)
    fail(ErrorCode::IncompatibleOperands, "sparse apply_transpose: dimension mismatch");
  std::fill(y.begin(), y.end(), 0.0);
  for (int r = 0; r < rows_; ++r) {
    double xr = x[r];
    if (xr == 0.0) continue;
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) y[col_idx_[k]] += values_[k] * xr;
  }
}

Vec SparseMatrix::apply_transpose(std::span<const double> x) const {
  Vec y(cols_);
  apply_transpose(x, y);
  return y;
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix t(cols_, rows_);
  for (int c : col_idx_) t.row_ptr_[c + 1]++;
  for (int r = 0; r < cols_; ++r) t.row_ptr_[r + 1] += t.row_ptr_[r];
  t.col_idx_.resize(nnz());
  t.values_.resize(nnz());
  std::vector<int> next(t.row_ptr_.begin(), t.row_ptr_.end() - 1);
  for (int r = 0; r < rows_; ++r) {
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      int dst = next[col_idx_[k]]++;
      t.col_idx_[dst] = r;
      t.values_[dst] = values_[k];
    }
  }
  return t;
}

double SparseMatrix::coeff(int row, int col) const {
  auto begin = col_idx_.begin() + row_ptr_[row];
  auto end = col_idx_.begin() + row_ptr_[row + 1];
  auto it = std::lower_bound(begin, end, col);
  if (it != end && *it == col) return values_[it - col_idx_.begin()];
  return 0.0;
}

double SparseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

std::vector<double> SparseMatrix::to_dense() const {
  std::vector<double> d(static_cast<size_t>(rows_) * cols_, 0.0);
  for (int r = 0; r < rows_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      d[static_cast<size_t>(r) * cols_ + col_idx_[k]] += values_[k];
  return d;
}

SparseMatrix SparseMatrix::scaled(double s) const {
  SparseMatrix m(*this);
  for (double& v : m.values_) v *= s;
  return m;
}

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols() != b.rows()) fail(ErrorCode::IncompatibleOperands, "sparse multiply: dimension mismatch");
  SparseMatrix c(a.rows(), b.cols());
  std::vector<double> acc(b.cols(), 0.0);
  std::vector<int> marker(b.cols(), -1);
  std::vector<int> cols;
  for (int r = 0; r < a.rows(); ++r) {
    cols.clear();
    for (int ka = a.row_ptr_[r]; ka < a.row_ptr_[r + 1]; ++ka) {
      int mid = a.col_idx_[ka];
      double av = a.values_[ka];
      for (int kb = b.row_ptr_[mid]; kb < b.row_ptr_[mid + 1]; ++kb) {
        int col = b.col_idx_[kb];
        if (marker[col] != r) {
          marker[col] = r;
          acc[col] = 0.0;
          cols.push_back(col);
        }
        acc[col] += av * b.values_[kb];
      }
    }
    std::sort(cols.begin(), cols.end());
    for (int col : cols) {
      c.col_idx_.push_back(col);
      c.values_.push_back(acc[col]);
    }
    c.row_ptr_[r + 1] = static_cast<int>(c.col_idx_.size());
  }
  return c;
}

SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b, double alpha, double beta) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    fail(ErrorCode::IncompatibleOperands, "sparse add: dimension mismatch");
  SparseMatrix c(a.rows(), a.cols());
  for (int r = 0; r < a.rows(); ++r) {
    int ka = a.row_ptr_[r], kb = b.row_ptr_[r];
    int ea = a.row_ptr_[r + 1], eb = b.row_ptr_[r + 1];
    while (ka < ea || kb < eb) {
      int ca = ka < ea ? a.col_idx_[ka] : a.cols();
      int cb = kb < eb ? b.col_idx_[kb] : b.cols();
      if (ca == cb) {
        c.col_idx_.push_back(ca);
        c.values_.push_back(alpha * a.values_[ka++] + beta * b.values_[kb++]);
      } else if (ca < cb) {
        c.col_idx_.push_back(ca);
        c.values_.push_back(alpha * a.values_[ka++]);
      } else {
        c.col_idx_.push_back(cb);
        c.values_.push_back(beta * b.values_[kb++]);
      }
    }
    c.row_ptr_[r + 1] = static_cast<int>(c.col_idx_.size());
  }
  return c;
}

SparseMatrix block_diagonal(const std::vector<const SparseMatrix*>& blocks) {
  int rows = 0, cols = 0;
  size_t nnz = 0;
  for (const auto* b : blocks) {
    rows += b->rows();
    cols += b->cols();
    nnz += b->nnz();
  }
  TripletBuilder t(rows, cols);
  t.reserve(nnz);
  int r0 = 0, c0 = 0;
  for (const auto* b : blocks) {
    const auto& rp = b->row_ptr();
    for (int r = 0; r < b->rows(); ++r)
      for (int k = rp[r]; k < rp[r + 1]; ++k) t.add(r0 + r, c0 + b->col_idx()[k], b->values()[k]);
    r0 += b->rows();
    c0 += b->cols();
  }
  return t.build();
}

SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b) {
  TripletBuilder t(a.rows() * b.rows(), a.cols() * b.cols());
  t.reserve(a.nnz() * b.nnz());
  for (int ra = 0; ra < a.rows(); ++ra)
    for (int ka = a.row_ptr()[ra]; ka < a.row_ptr()[ra + 1]; ++ka)
      for (int rb = 0; rb < b.rows(); ++rb)
        for (int kb = b.row_ptr()[rb]; kb < b.row_ptr()[rb + 1]; ++kb)
          t.add(ra * b.rows() + rb, a.col_idx()[ka] * b.cols() + b.col_idx()[kb],
                a.values()[ka] * b.values()[kb]);
  return t.build();
}

}  // namespace feecns
