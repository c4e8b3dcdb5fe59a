#pragma once

#include <array>
#include <functional>

#include "multipatch/multipatch_space.hpp"
#include "multipatch/quadrature_grid.hpp"

namespace feecns {

using ScalarFunction = std::function<double(double, double)>;
using VectorFunction = std::function<std::array<double, 2>(double, double)>;

// L2 projection onto the (broken) space: M c = (integral of f * Lambda_j).
Field l2_project(const QuadratureGrid& qg, Slot slot, const ScalarFunction& f);
Field l2_project(const QuadratureGrid& qg, const VectorFunction& f);

// Point value of a field; V0/V2 fill entry 0 only. Throws OutOfDomain outside the domain.
std::array<double, 2> eval_field(const MultipatchSpace& space, const Field& field, double x, double y);
// Same, forcing evaluation from patch k (for two-sided interface checks).
std::array<double, 2> eval_field_in_patch(const MultipatchSpace& space, const Field& field, int k, double x,
                                          double y);

}  // namespace feecns
