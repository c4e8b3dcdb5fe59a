#include "operators/weak_operators.hpp"

#include "core/errors.hpp"

namespace feecns {

namespace {

void check(const OperatorContext& ctx, Slot s, std::span<const double> v, const char* what) {
  require(static_cast<int>(v.size()) == ctx.space().dim(s), ErrorCode::IncompatibleOperands,
          std::string(what) + ": expected a " + slot_name(s) + " vector of size " +
              std::to_string(ctx.space().dim(s)) + ", got " + std::to_string(v.size()));
}

// -div_h^T M2 q
Vec grad_functional(const MultipatchSpace& s, std::span<const double> q) {
  Vec f = s.div_h().apply_transpose(s.mass(Slot::V2).apply(q));
  for (double& x : f) x = -x;
  return f;
}

Vec weak_grad_bnd(const OperatorContext& ctx, std::span<const double> q, bool with_boundary) {
  const MultipatchSpace& s = ctx.space();
  Vec f = grad_functional(s, q);
  if (with_boundary && ctx.bounded()) f = f + ctx.boundary()->grad_boundary().apply(q);
  s.mass_solve(Slot::V1, f);
  return f;
}

}  // namespace

Vec weak_grad(const OperatorContext& ctx, std::span<const double> q) {
  check(ctx, Slot::V2, q, "weak_grad");
  return weak_grad_bnd(ctx, q, false);
}

Vec weak_grad_full(const OperatorContext& ctx, std::span<const double> q) {
  check(ctx, Slot::V2, q, "weak_grad_full");
  return weak_grad_bnd(ctx, q, true);
}

Vec weak_grad_with_pressure_bc(const OperatorContext& ctx, std::span<const double> q) {
  check(ctx, Slot::V2, q, "weak_grad_with_pressure_bc");
  require(ctx.bounded(), ErrorCode::ConfigError, "weak_grad_with_pressure_bc: no boundary in periodic mode");
  const MultipatchSpace& s = ctx.space();
  Vec f = grad_functional(s, q);
  ctx.apply_pn(f);
  f = f + ctx.boundary()->pressure_load();
  s.mass_solve(Slot::V1, f);
  return f;
}

Vec weak_curl(const OperatorContext& ctx, std::span<const double> v) {
  check(ctx, Slot::V1, v, "weak_curl");
  const MultipatchSpace& s = ctx.space();
  Vec f = s.curl_h().apply_transpose(s.mass(Slot::V1).apply(v));
  s.mass_solve(Slot::V0, f);
  return f;
}

Vec weak_curl_with_tangential_bc(const OperatorContext& ctx, std::span<const double> v) {
  check(ctx, Slot::V1, v, "weak_curl_with_tangential_bc");
  if (!ctx.bounded()) return weak_curl(ctx, v);
  const MultipatchSpace& s = ctx.space();
  const BoundaryOperators& b = *ctx.boundary();
  Vec bnd = b.curl_boundary().apply(v) + b.tangent_load();
  Vec f = s.curl_h().apply_transpose(s.mass(Slot::V1).apply(v)) - s.pc(Slot::V0).apply_transpose(bnd);
  s.mass_solve(Slot::V0, f);
  return f;
}

Vec interior_product(const OperatorContext& ctx, std::span<const double> u, int k) {
  check(ctx, Slot::V1, u, "interior_product");
  require(k == 0 || k == 1, ErrorCode::InvalidArgument, "interior_product: axis must be 0 or 1");
  const MultipatchSpace& s = ctx.space();
  Vec c = s.mixed(k).apply(u);
  s.mass_solve(Slot::V2, c);
  return c;
}

double advection_form(const OperatorContext& ctx, std::span<const double> u, std::span<const double> v,
                      std::span<const double> w) {
  check(ctx, Slot::V1, u, "advection_form");
  check(ctx, Slot::V1, v, "advection_form");
  check(ctx, Slot::V1, w, "advection_form");
  const QuadratureGrid& qg = ctx.quad();
  Vec ux, uy;
  qg.eval_v1(u, ux, uy);
  double total = 0.0;
  for (int k = 0; k < 2; ++k) {
    const Vec iv = interior_product(ctx, v, k), iw = interior_product(ctx, w, k);
    const Vec gv = weak_grad_full(ctx, iv), gw = weak_grad(ctx, iw);
    Vec ivq, iwq, gvx, gvy, gwx, gwy;
    qg.eval_scalar(Slot::V2, iv, ivq);
    qg.eval_scalar(Slot::V2, iw, iwq);
    qg.eval_v1(gv, gvx, gvy);
    qg.eval_v1(gw, gwx, gwy);
    for (int q = 0; q < qg.size(); ++q)
      total += qg.w()[q] * (iwq[q] * (ux[q] * gvx[q] + uy[q] * gvy[q]) - ivq[q] * (ux[q] * gwx[q] + uy[q] * gwy[q]));
  }
  return 0.5 * total;
}

Vec advection_residual(const OperatorContext& ctx, std::span<const double> u, std::span<const double> v) {
  check(ctx, Slot::V1, u, "advection_residual");
  check(ctx, Slot::V1, v, "advection_residual");
  const MultipatchSpace& s = ctx.space();
  const QuadratureGrid& qg = ctx.quad();
  const int nq = qg.size();
  Vec ux, uy;
  qg.eval_v1(u, ux, uy);
  Vec r(s.dim(Slot::V1), 0.0), f(nq), fx(nq), fy(nq), gx, gy, av;
  for (int k = 0; k < 2; ++k) {
    const Vec a = interior_product(ctx, v, k);
    // test-function slot: the weak gradient of the test moves onto div_h of (a u) projected to V1
    qg.eval_scalar(Slot::V2, a, av);
    for (int q = 0; q < nq; ++q) {
      fx[q] = av[q] * ux[q];
      fy[q] = av[q] * uy[q];
    }
    Vec z = qg.integrate_v1(fx, fy);
    s.mass_solve(Slot::V1, z);
    Vec acc = s.div_h().apply(z);
    // trial slot: u . grad(a) integrated against V2
    const Vec g = weak_grad_full(ctx, a);
    qg.eval_v1(g, gx, gy);
    for (int q = 0; q < nq; ++q) f[q] = ux[q] * gx[q] + uy[q] * gy[q];
    Vec m = qg.integrate_scalar(Slot::V2, f);
    s.mass_solve(Slot::V2, m);
    acc = acc + m;
    r = r + s.mixed(k).apply_transpose(acc);
  }
  for (double& x : r) x *= 0.5;
  return r;
}

Vec viscous_residual(const OperatorContext& ctx, std::span<const double> u) {
  check(ctx, Slot::V1, u, "viscous_residual");
  const MultipatchSpace& s = ctx.space();
  const Vec w = weak_curl_with_tangential_bc(ctx, u);
  return s.mass(Slot::V1).apply(s.curl_h().apply(w));
}

double viscous_form(const OperatorContext& ctx, std::span<const double> u, std::span<const double> v) {
  check(ctx, Slot::V1, v, "viscous_form");
  return dot(viscous_residual(ctx, u), v);
}

Vec apply_penalization(const OperatorContext& ctx, std::span<const double> u) {
  check(ctx, Slot::V1, u, "apply_penalization");
  return ctx.space().penalization().apply(u);
}

}  // namespace feecns
