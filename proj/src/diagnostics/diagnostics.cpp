#include "diagnostics/diagnostics.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace feecns {

DiagnosticsRecord measure(const OperatorContext& ctx, std::span<const double> u, double time,
                          int picard_iterations) {
  const MultipatchSpace& s = ctx.space();
  const QuadratureGrid& qg = ctx.quad();
  require(static_cast<int>(u.size()) == s.dim(Slot::V1), ErrorCode::IncompatibleOperands,
          "measure: velocity size mismatch");
  DiagnosticsRecord d;
  d.time = time;
  d.picard_iterations = picard_iterations;
  Vec ux, uy;
  qg.eval_v1(u, ux, uy);
  double e = 0.0, mx = 0.0, my = 0.0;
  for (int q = 0; q < qg.size(); ++q) {
    const double w = qg.w()[q];
    e += w * (ux[q] * ux[q] + uy[q] * uy[q]);
    mx += w * ux[q];
    my += w * uy[q];
  }
  d.energy = 0.5 * e;
  d.momentum = {mx, my};
  const Vec dv = s.div_h().apply(u);
  d.div_l2 = std::sqrt(std::max(0.0, dot(dv, s.mass(Slot::V2).apply(dv))));
  d.jump_energy = std::max(0.0, dot(u, s.penalization().apply(u)));
  d.enstrophy_term = viscous_form(ctx, u, u);
  return d;
}

Vec vorticity(const OperatorContext& ctx, std::span<const double> u) { return weak_curl_with_tangential_bc(ctx, u); }

double l2_error(const OperatorContext& ctx, std::span<const double> u, const VectorFunction& exact) {
  const QuadratureGrid& qg = ctx.quad();
  require(static_cast<int>(u.size()) == ctx.space().dim(Slot::V1), ErrorCode::IncompatibleOperands,
          "l2_error: velocity size mismatch");
  Vec ux, uy;
  qg.eval_v1(u, ux, uy);
  double e = 0.0;
  for (int q = 0; q < qg.size(); ++q) {
    const auto v = exact(qg.x()[q], qg.y()[q]);
    const double dx = ux[q] - v[0], dy = uy[q] - v[1];
    e += qg.w()[q] * (dx * dx + dy * dy);
  }
  return std::sqrt(e);
}

double l2_error(const OperatorContext& ctx, Slot slot, std::span<const double> c, const ScalarFunction& exact) {
  require(slot != Slot::V1, ErrorCode::InvalidArgument, "l2_error: scalar slot expected");
  require(static_cast<int>(c.size()) == ctx.space().dim(slot), ErrorCode::IncompatibleOperands,
          "l2_error: coefficient size mismatch");
  const QuadratureGrid& qg = ctx.quad();
  Vec v;
  qg.eval_scalar(slot, c, v);
  double e = 0.0;
  for (int q = 0; q < qg.size(); ++q) {
    const double d = v[q] - exact(qg.x()[q], qg.y()[q]);
    e += qg.w()[q] * d * d;
  }
  return std::sqrt(e);
}

double convergence_order(const std::vector<std::pair<double, double>>& samples) {
  require(samples.size() >= 2, ErrorCode::InvalidArgument, "convergence_order: need at least two samples");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < samples.size(); ++i) {
    const auto [h, e] = samples[i];
    if (!(h > 0.0) || !(e > 0.0) || !std::isfinite(h) || !std::isfinite(e))
      fail(ErrorCode::DataError, "convergence_order: sizes and errors must be positive");
    if (i > 0 && !(h < samples[i - 1].first))
      fail(ErrorCode::DataError, "convergence_order: sizes must be strictly decreasing");
    const double x = std::log(h), y = std::log(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(samples.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace feecns
