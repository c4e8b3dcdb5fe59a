#pragma once

#include <optional>
#include <span>
#include <vector>

#include "core/solvers.hpp"
#include "core/sparse_matrix.hpp"
#include "spline/derham_patch.hpp"
#include "spline/field.hpp"

namespace feecns {

struct GridSpec {
  int degree = 2;
  int patches_x = 1, patches_y = 1;
  int cells_x = 8, cells_y = 8;  // per patch
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  bool periodic_x = false, periodic_y = false;
  std::optional<int> moment_order;    // default: degree
  std::optional<int> stencil_radius;  // default: moment_order + 1

  bool operator==(const GridSpec&) const = default;
};

/// Interface stencil: P phi_{k,0} = sum_i c_i phi_{k,i} + c'_i phi_{k-1,N-i}.
struct ProjectionStencil1D {
  int radius = 0;
  std::vector<double> c, c_prime;  // size radius + 1
};

// Stencil for the clamped patch space `s` (the S_{p+1} factor normal to the interface).
// moment_order < 0 requests no moment conditions.
ProjectionStencil1D projection_stencil_1d(const SplineSpace1D& s, int radius, int moment_order);
// Same on a clamped patch of `n_cells` cells over [0, 1].
ProjectionStencil1D projection_stencil_1d(int degree, int n_cells, int radius, int moment_order);

/// Broken de Rham spaces over a patches_x by patches_y grid of equal patches.
/// A periodic direction with a single patch uses periodic splines; with several patches it uses
/// clamped patches joined by a wrap-around interface.
/// Global DOFs are patch-major (patch k = ky * patches_x + kx); inside a patch V1 stores the
/// x component then the y component, each with index ix * ny + iy.
class MultipatchSpace {
 public:
  explicit MultipatchSpace(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  int degree() const { return grid_.degree; }
  int n_patches() const { return static_cast<int>(patches_.size()); }
  int patch_index(int kx, int ky) const { return ky * grid_.patches_x + kx; }
  const DeRhamPatch& patch(int k) const { return patches_[k]; }
  bool conforming() const { return n_patches() == 1; }
  bool fully_periodic() const { return grid_.periodic_x && grid_.periodic_y; }

  int dim(Slot s) const { return dims_[static_cast<int>(s)]; }
  int offset(Slot s, int k) const { return offsets_[static_cast<int>(s)][k]; }

  const SparseMatrix& mass(Slot s) const { return mass_[static_cast<int>(s)]; }
  const SparseMatrix& pc(Slot s) const { return pc_[static_cast<int>(s)]; }
  const SparseMatrix& div() const { return div_; }
  const SparseMatrix& curl() const { return curl_; }
  const SparseMatrix& div_h() const { return div_h_; }    // Div * Pc1
  const SparseMatrix& curl_h() const { return curl_h_; }  // Curl * Pc0
  const SparseMatrix& mixed(int axis) const { return mixed_[axis]; }  // B_1, B_2
  const SparseMatrix& penalization() const { return penalization_; }
  const ProjectionStencil1D& stencil_x() const { return stencil_x_; }
  const ProjectionStencil1D& stencil_y() const { return stencil_y_; }
  int moment_order() const { return moment_order_; }
  int stencil_radius() const { return stencil_radius_; }

  // x <- M^{-1} x, exact factor-wise solve.
  void mass_solve(Slot s, std::span<double> x) const;
  Vec apply_mass_inverse(Slot s, std::span<const double> b) const;

  double h_min() const;
  double area() const { return (grid_.x1 - grid_.x0) * (grid_.y1 - grid_.y0); }
  // Patch containing (x, y); throws OutOfDomain outside the domain.
  int locate(double x, double y) const;

  Field zero(Slot s) const;
  Conformity natural_conformity() const { return conforming() ? Conformity::Conforming : Conformity::Broken; }

 private:
  GridSpec grid_;
  int moment_order_ = 0, stencil_radius_ = 0;
  std::vector<std::shared_ptr<const DirectionFactors>> fx_, fy_;
  std::vector<DeRhamPatch> patches_;
  int dims_[3] = {0, 0, 0};
  std::vector<int> offsets_[3];
  SparseMatrix mass_[3], pc_[3], mixed_[2];
  SparseMatrix div_, curl_, div_h_, curl_h_, penalization_;
  ProjectionStencil1D stencil_x_, stencil_y_;

  void build_projections();
};

}  // namespace feecns
