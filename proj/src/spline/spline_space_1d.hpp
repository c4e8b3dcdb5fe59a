#pragma once

#include <span>
#include <vector>

#include "core/quadrature.hpp"
#include "core/sparse_matrix.hpp"

namespace feecns {

/// Uniform B-spline space on [a, b], clamped or periodic.
/// In cell c the nonzero basis functions are c, c+1, ..., c+degree (taken modulo dim when periodic).
class SplineSpace1D {
 public:
  SplineSpace1D() = default;
  SplineSpace1D(int degree, int n_cells, double a, double b, bool periodic);

  int degree() const { return degree_; }
  int n_cells() const { return n_cells_; }
  int dim() const { return dim_; }
  double a() const { return a_; }
  double b() const { return b_; }
  double h() const { return h_; }
  bool periodic() const { return periodic_; }
  const std::vector<double>& knots() const { return knots_; }

  // Cell containing x; points outside [a, b] within round-off are clamped.
  int cell_of(double x) const;
  int index(int cell, int local) const { return periodic_ ? (cell + local) % dim_ : cell + local; }
  // Values of the degree + 1 nonzero functions in `cell` at x.
  void values(int cell, double x, double* out) const;
  void derivatives(int cell, double x, double* out) const;
  double evaluate(std::span<const double> coeffs, double x) const;

 private:
  int degree_ = 0, n_cells_ = 0, dim_ = 0;
  double a_ = 0.0, b_ = 1.0, h_ = 1.0;
  bool periodic_ = false;
  std::vector<double> knots_;
  void values_deg(int cell, double x, int deg, double* out) const;
};

/// Basis values at the Gauss points of every cell.
struct BasisTable {
  int n_cells = 0, points_per_cell = 0, width = 0;  // width = degree + 1
  std::vector<double> x, w;                       // physical points and weights
  std::vector<double> values;                     // [q * width + r]
  int n_points() const { return n_cells * points_per_cell; }
  int first(int q) const { return q / points_per_cell; }  // cell index = first local basis function
};

BasisTable make_basis_table(const SplineSpace1D& s, int points_per_cell);

// Matrix d/dx : S_{q} -> S_{q-1}, with the low space sharing the mesh of the high one.
SparseMatrix derivative_incidence_1d(const SplineSpace1D& high, const SplineSpace1D& low);
// (i, j) = integral of a_i * b_j
SparseMatrix mixed_mass_1d(const SplineSpace1D& a, const SplineSpace1D& b, int points_per_cell);
inline SparseMatrix mass_1d(const SplineSpace1D& s, int points_per_cell) {
  return mixed_mass_1d(s, s, points_per_cell);
}

}  // namespace feecns
