#pragma once

#include "multipatch/multipatch_space.hpp"

namespace feecns {

/// Tensor Gauss points (elevated rule) over all patches, with sum-factorized evaluation
/// of fields and integration against basis functions.
/// Point q of patch k is stored at k * points_per_patch() + qx * NQy + qy.
class QuadratureGrid {
 public:
  explicit QuadratureGrid(const MultipatchSpace& space);

  const MultipatchSpace& space() const { return *space_; }
  int points_per_patch() const { return nqx_ * nqy_; }
  int size() const { return points_per_patch() * space_->n_patches(); }
  const Vec& x() const { return x_; }
  const Vec& y() const { return y_; }
  const Vec& w() const { return w_; }

  void eval_v1(std::span<const double> coeffs, Vec& ux, Vec& uy) const;
  void eval_scalar(Slot s, std::span<const double> coeffs, Vec& out) const;
  // out_j = sum_q w_q (fx_q (Lambda_j)_x + fy_q (Lambda_j)_y)
  Vec integrate_v1(std::span<const double> fx, std::span<const double> fy) const;
  // out_j = sum_q w_q f_q Lambda_j
  Vec integrate_scalar(Slot s, std::span<const double> f) const;

 private:
  const MultipatchSpace* space_;
  int nqx_ = 0, nqy_ = 0;
  Vec x_, y_, w_;
};

}  // namespace feecns
