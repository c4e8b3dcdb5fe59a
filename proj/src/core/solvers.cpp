#include "core/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/errors.hpp"

namespace feecns {

LinearSolveReport cg_solve(const LinearOperator& op, std::span<const double> b, std::span<double> x,
                           double tol, int max_iter, const LinearOperator* precond) {
  const size_t n = b.size();
  require(x.size() == n, ErrorCode::IncompatibleOperands, "cg_solve: size mismatch");
  if (!all_finite(b) || !all_finite(x)) fail(ErrorCode::NumericalBreakdown, "cg_solve: non-finite input");

  LinearSolveReport rep;
  double bnorm = norm2(b);
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    rep.converged = true;
    return rep;
  }
  Vec r(n), z(n), p(n), q(n);
  op(x, q);
  for (size_t i = 0; i < n; ++i) r[i] = b[i] - q[i];
  double rnorm = norm2(r);
  rep.residual = rnorm / bnorm;
  if (rep.residual <= tol) {
    rep.converged = true;
    return rep;
  }
  if (precond)
    (*precond)(r, z);
  else
    z = r;
  p = z;
  double rz = dot(r, z);
  for (int it = 1; it <= max_iter; ++it) {
    op(p, q);
    double pq = dot(p, q);
    if (!std::isfinite(pq) || pq <= 0.0)
      fail(ErrorCode::NumericalBreakdown, "cg_solve: operator is not positive definite (p^T A p = " +
                                              std::to_string(pq) + ")");
    double alpha = rz / pq;
    axpy(alpha, p, x);
    axpy(-alpha, q, r);
    rnorm = norm2(r);
    rep.iterations = it;
    rep.residual = rnorm / bnorm;
    if (!std::isfinite(rnorm)) fail(ErrorCode::NumericalBreakdown, "cg_solve: non-finite residual");
    if (rep.residual <= tol) {
      rep.converged = true;
      return rep;
    }
    if (precond)
      (*precond)(r, z);
    else
      z = r;
    double rz_new = dot(r, z);
    double beta = rz_new / rz;
    rz = rz_new;
    for (size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  return rep;
}

EnvelopeCholesky::EnvelopeCholesky(const SparseMatrix& a) {
  require(a.rows() == a.cols(), ErrorCode::InvalidArgument, "EnvelopeCholesky: matrix must be square");
  n_ = a.rows();
  first_.assign(n_, 0);
  for (int i = 0; i < n_; ++i) {
    int f = i;
    for (int k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k)
      if (a.values()[k] != 0.0) f = std::min(f, a.col_idx()[k]);
    first_[i] = f;
  }
  // Symmetric structure: the envelope of row i also covers entries a(j, i) with j > i,
  // which is guaranteed because a is symmetric.
  start_.assign(n_ + 1, 0);
  for (int i = 0; i < n_; ++i) start_[i + 1] = start_[i] + (i - first_[i] + 1);
  data_.assign(start_[n_], 0.0);
  for (int i = 0; i < n_; ++i)
    for (int k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
      int j = a.col_idx()[k];
      if (j <= i && j >= first_[i]) data_[start_[i] + (j - first_[i])] = a.values()[k];
    }

  for (int i = 0; i < n_; ++i) {
    double* li = &data_[start_[i]];
    for (int j = first_[i]; j <= i; ++j) {
      int k0 = std::max(first_[i], first_[j]);
      double s = li[j - first_[i]];
      const double* lj = &data_[start_[j]];
      for (int k = k0; k < j; ++k) s -= li[k - first_[i]] * lj[k - first_[j]];
      if (j < i) {
        li[j - first_[i]] = s / lj[j - first_[j]];
      } else {
        if (!(s > 0.0) || !std::isfinite(s))
          fail(ErrorCode::FactorizationFailure,
               "EnvelopeCholesky: matrix is not positive definite at row " + std::to_string(i));
        li[i - first_[i]] = std::sqrt(s);
      }
    }
  }
}

void EnvelopeCholesky::solve_strided(double* x, int stride) const {
  // forward: L y = b
  for (int i = 0; i < n_; ++i) {
    double s = x[i * stride];
    const double* li = &data_[start_[i]];
    for (int k = first_[i]; k < i; ++k) s -= li[k - first_[i]] * x[k * stride];
    x[i * stride] = s / li[i - first_[i]];
  }
  // backward: L^T x = y
  for (int i = n_ - 1; i >= 0; --i) {
    const double* li = &data_[start_[i]];
    double xi = x[i * stride] / li[i - first_[i]];
    x[i * stride] = xi;
    for (int k = first_[i]; k < i; ++k) x[k * stride] -= li[k - first_[i]] * xi;
  }
}

void EnvelopeCholesky::solve_in_place(std::span<double> x) const {
  require(static_cast<int>(x.size()) == n_, ErrorCode::IncompatibleOperands, "EnvelopeCholesky: size mismatch");
  solve_strided(x.data(), 1);
}

void KroneckerSolver::solve_in_place(std::span<double> x) const {
  const int na = a_->size(), nb = b_->size();
  require(static_cast<int>(x.size()) == na * nb, ErrorCode::IncompatibleOperands,
          "KroneckerSolver: size mismatch");
  for (int ia = 0; ia < na; ++ia) b_->solve_strided(x.data() + static_cast<size_t>(ia) * nb, 1);
  for (int ib = 0; ib < nb; ++ib) a_->solve_strided(x.data() + ib, nb);
}

}  // namespace feecns
