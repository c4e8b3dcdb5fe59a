#pragma once

#include <functional>
#include <span>
#include <vector>

#include "core/sparse_matrix.hpp"
#include "core/vector_ops.hpp"

namespace feecns {

struct LinearSolveReport {
  int iterations = 0;
  double residual = 0.0;  // final relative residual
  bool converged = false;
};

using LinearOperator = std::function<void(std::span<const double>, std::span<double>)>;

/// Preconditioned conjugate gradients on an SPD (or consistent semidefinite) operator.
/// x holds the initial guess on entry. Stops when |r| <= tol * |b|.
LinearSolveReport cg_solve(const LinearOperator& op, std::span<const double> b, std::span<double> x,
                           double tol, int max_iter, const LinearOperator* precond = nullptr);

/// Cholesky factorization of an SPD matrix stored by rows inside its envelope.
/// Banded matrices keep their band; cyclic-banded ones only fill the trailing rows.
class EnvelopeCholesky {
 public:
  EnvelopeCholesky() = default;
  explicit EnvelopeCholesky(const SparseMatrix& a);

  int size() const { return n_; }
  void solve_in_place(std::span<double> x) const;
  // Solve on a strided view: x[offset + i * stride].
  void solve_strided(double* x, int stride) const;

 private:
  int n_ = 0;
  std::vector<int> first_;  // first stored column of each row
  std::vector<int> start_;  // offset of row i in data_
  std::vector<double> data_;
  double at(int i, int j) const { return data_[start_[i] + (j - first_[i])]; }
};

/// Inverse of A (x) B applied factor-wise; index ia * nb + ib.
class KroneckerSolver {
 public:
  KroneckerSolver() = default;
  KroneckerSolver(const EnvelopeCholesky* a, const EnvelopeCholesky* b) : a_(a), b_(b) {}
  int size() const { return a_->size() * b_->size(); }
  void solve_in_place(std::span<double> x) const;

 private:
  const EnvelopeCholesky* a_ = nullptr;
  const EnvelopeCholesky* b_ = nullptr;
};

}  // namespace feecns
