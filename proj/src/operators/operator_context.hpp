#pragma once

#include <memory>
#include <optional>
#include <span>

#include "multipatch/multipatch_space.hpp"
#include "multipatch/quadrature_grid.hpp"
#include "operators/boundary.hpp"

namespace feecns {

/// Space, quadrature and boundary terms shared by all discrete operators.
/// Fully periodic grids run in periodic mode; any other grid needs a boundary spec.
class OperatorContext {
 public:
  OperatorContext(const GridSpec& grid, const std::optional<BoundarySpec>& bc);

  const MultipatchSpace& space() const { return *space_; }
  const QuadratureGrid& quad() const { return *quad_; }
  bool bounded() const { return boundary_ != nullptr; }
  const BoundaryOperators* boundary() const { return boundary_.get(); }

  // Identity in periodic mode.
  const SparseMatrix& pn() const { return boundary_ ? boundary_->pn() : identity1_; }
  void apply_pn(std::span<double> v) const {
    if (boundary_) boundary_->apply_pn(v);
  }
  // True when the pressure is fixed only up to a constant.
  bool pressure_has_kernel() const { return !boundary_ || !boundary_->has_pressure_boundary(); }

 private:
  std::unique_ptr<MultipatchSpace> space_;
  std::unique_ptr<QuadratureGrid> quad_;
  std::unique_ptr<BoundaryOperators> boundary_;
  SparseMatrix identity1_;
};

}  // namespace feecns
