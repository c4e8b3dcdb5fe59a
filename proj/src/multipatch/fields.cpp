#include "multipatch/fields.hpp"

#include "core/errors.hpp"

namespace feecns {

Field l2_project(const QuadratureGrid& qg, Slot slot, const ScalarFunction& f) {
  require(slot != Slot::V1, ErrorCode::InvalidArgument, "l2_project: V1 needs a vector function");
  Vec vals(qg.size());
  for (int q = 0; q < qg.size(); ++q) vals[q] = f(qg.x()[q], qg.y()[q]);
  if (!all_finite(vals)) fail(ErrorCode::DataError, "l2_project: non-finite function values");
  const MultipatchSpace& s = qg.space();
  Vec rhs = qg.integrate_scalar(slot, vals);
  s.mass_solve(slot, std::span<double>(rhs));
  return Field{slot, s.natural_conformity(), std::move(rhs)};
}

Field l2_project(const QuadratureGrid& qg, const VectorFunction& f) {
  Vec fx(qg.size()), fy(qg.size());
  for (int q = 0; q < qg.size(); ++q) {
    auto v = f(qg.x()[q], qg.y()[q]);
    fx[q] = v[0];
    fy[q] = v[1];
  }
  if (!all_finite(fx) || !all_finite(fy)) fail(ErrorCode::DataError, "l2_project: non-finite function values");
  const MultipatchSpace& s = qg.space();
  Vec rhs = qg.integrate_v1(fx, fy);
  s.mass_solve(Slot::V1, std::span<double>(rhs));
  return Field{Slot::V1, s.natural_conformity(), std::move(rhs)};
}

namespace {

double eval_tensor(const SplineSpace1D& sx, const SplineSpace1D& sy, const double* c, double x, double y) {
  double vx[32], vy[32];
  int cx = sx.cell_of(x), cy = sy.cell_of(y);
  sx.values(cx, x, vx);
  sy.values(cy, y, vy);
  double s = 0.0;
  for (int a = 0; a <= sx.degree(); ++a)
    for (int b = 0; b <= sy.degree(); ++b) s += vx[a] * vy[b] * c[sx.index(cx, a) * sy.dim() + sy.index(cy, b)];
  return s;
}

}  // namespace

std::array<double, 2> eval_field_in_patch(const MultipatchSpace& space, const Field& field, int k, double x,
                                          double y) {
  require(static_cast<int>(field.coeffs.size()) == space.dim(field.slot), ErrorCode::IncompatibleOperands,
          "eval_field: coefficient size does not match the space");
  const DeRhamPatch& P = space.patch(k);
  const double* base = field.coeffs.data() + space.offset(field.slot, k);
  switch (field.slot) {
    case Slot::V0: return {eval_tensor(P.fx->high, P.fy->high, base, x, y), 0.0};
    case Slot::V2: return {eval_tensor(P.fx->low, P.fy->low, base, x, y), 0.0};
    case Slot::V1:
      return {eval_tensor(P.fx->high, P.fy->low, base, x, y),
              eval_tensor(P.fx->low, P.fy->high, base + P.dim1x(), x, y)};
  }
  return {0.0, 0.0};
}

std::array<double, 2> eval_field(const MultipatchSpace& space, const Field& field, double x, double y) {
  return eval_field_in_patch(space, field, space.locate(x, y), x, y);
}

}  // namespace feecns
