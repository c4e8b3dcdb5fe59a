#include "stepper/time_integrator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "core/errors.hpp"

namespace feecns {

void validate(const StepperConfig& c) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) fail(ErrorCode::ConfigError, std::string(name) + " must be positive");
  };
  positive(c.dt, "dt");
  positive(c.picard_tol, "picard_tol");
  positive(c.cg_tol, "cg_tol");
  positive(c.cfl_constant, "cfl_constant");
  positive(c.dt_max, "dt_max");
  if (!(c.cg_tol < c.picard_tol)) fail(ErrorCode::ConfigError, "cg_tol must be smaller than picard_tol");
  if (c.picard_max_iter < 1 || c.cg_max_iter < 1) fail(ErrorCode::ConfigError, "iteration limits must be >= 1");
  if (!(c.nu >= 0.0) || !(c.alpha >= 0.0)) fail(ErrorCode::ConfigError, "nu and alpha must be >= 0");
  if (!(c.cfl_safety > 0.0 && c.cfl_safety <= 1.0)) fail(ErrorCode::ConfigError, "cfl_safety must lie in (0, 1]");
}

Stepper::Stepper(const OperatorContext& ctx, const StepperConfig& cfg, const VectorFunction& forcing)
    : ctx_(&ctx), cfg_(cfg) {
  validate(cfg_);
  const MultipatchSpace& s = ctx.space();
  ones2_.assign(s.dim(Slot::V2), 1.0);
  p_warm_.assign(s.dim(Slot::V2), 0.0);
  forcing_.assign(s.dim(Slot::V1), 0.0);
  if (forcing) {
    const QuadratureGrid& qg = ctx.quad();
    Vec fx(qg.size()), fy(qg.size());
    for (int q = 0; q < qg.size(); ++q) {
      auto f = forcing(qg.x()[q], qg.y()[q]);
      fx[q] = f[0];
      fy[q] = f[1];
    }
    if (!all_finite(fx) || !all_finite(fy)) fail(ErrorCode::DataError, "forcing: non-finite values");
    forcing_ = s.pc(Slot::V1).apply_transpose(qg.integrate_v1(fx, fy));
  }
  if (ctx.pressure_has_kernel()) {
    if (cfg_.pressure_eps >= 0.0) {
      eps_ = cfg_.pressure_eps;
    } else {
      // Rayleigh quotient of A against M2 for a fixed pseudo-random vector sets the scale
      std::mt19937 rng(12345);
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      Vec q(s.dim(Slot::V2)), aq(q.size());
      for (double& v : q) v = u(rng);
      apply_pressure_operator(q, aq);
      eps_ = 1e-12 * dot(q, aq) / dot(q, s.mass(Slot::V2).apply(q));
    }
  }
}

void Stepper::set_dt(double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) fail(ErrorCode::InvalidArgument, "set_dt: dt must be positive");
  cfg_.dt = dt;
}

double Stepper::m1_norm(std::span<const double> v) const {
  return std::sqrt(std::max(0.0, dot(v, ctx_->space().mass(Slot::V1).apply(v))));
}

Vec Stepper::rest_residual(std::span<const double> u_bar) const {
  const OperatorContext& ctx = *ctx_;
  Vec r = advection_residual(ctx, u_bar, u_bar);
  if (cfg_.nu > 0.0) axpy(cfg_.nu, viscous_residual(ctx, u_bar), r);
  if (cfg_.alpha > 0.0) axpy(cfg_.alpha, apply_penalization(ctx, u_bar), r);
  axpy(-1.0, forcing_, r);
  if (ctx.bounded()) r = r + ctx.boundary()->pressure_load();
  return r;
}

Vec Stepper::pressure_functional(std::span<const double> p) const {
  const MultipatchSpace& s = ctx_->space();
  Vec f = s.div_h().apply_transpose(s.mass(Slot::V2).apply(p));
  for (double& v : f) v = -v;
  ctx_->apply_pn(f);
  return f;
}

void Stepper::apply_pressure_operator(std::span<const double> p, std::span<double> out) const {
  const MultipatchSpace& s = ctx_->space();
  Vec f = pressure_functional(p);
  s.mass_solve(Slot::V1, f);
  ctx_->apply_pn(f);
  Vec d = s.mass(Slot::V2).apply(s.div_h().apply(f));
  Vec mp = eps_ > 0.0 ? s.mass(Slot::V2).apply(p) : Vec();
  for (size_t i = 0; i < out.size(); ++i) out[i] = -d[i] + (eps_ > 0.0 ? eps_ * mp[i] : 0.0);
}

LinearSolveReport Stepper::solve_pressure_system(Vec rhs, Vec& p) const {
  const MultipatchSpace& s = ctx_->space();
  const bool kernel = ctx_->pressure_has_kernel();
  if (kernel) {
    // the constants span the kernel: keep the right-hand side in the range
    double mean = 0.0;
    for (double v : rhs) mean += v;
    mean /= static_cast<double>(rhs.size());
    for (double& v : rhs) v -= mean;
  }
  if (static_cast<int>(p.size()) != s.dim(Slot::V2)) p.assign(s.dim(Slot::V2), 0.0);
  LinearOperator op = [this](std::span<const double> x, std::span<double> y) { apply_pressure_operator(x, y); };
  LinearOperator pre = [&s](std::span<const double> x, std::span<double> y) {
    std::copy(x.begin(), x.end(), y.begin());
    s.mass_solve(Slot::V2, y);
  };
  LinearSolveReport rep = cg_solve(op, rhs, p, cfg_.cg_tol, cfg_.cg_max_iter, &pre);
  if (kernel) {
    const Vec m1 = s.mass(Slot::V2).apply(ones2_);
    const double c = dot(m1, p) / dot(m1, ones2_);
    for (double& v : p) v -= c;
  }
  return rep;
}

Vec Stepper::pressure_rhs(std::span<const double> rest, std::span<const double> u_n) const {
  const MultipatchSpace& s = ctx_->space();
  Vec f(rest.begin(), rest.end());
  s.mass_solve(Slot::V1, f);
  ctx_->apply_pn(f);
  Vec d = s.div_h().apply(f);
  // targeting div_h u^{n+1} = 0 (rather than an unchanged divergence) keeps solver residuals from accumulating
  if (!u_n.empty()) axpy(-1.0 / cfg_.dt, s.div_h().apply(u_n), d);
  return s.mass(Slot::V2).apply(d);
}

LinearSolveReport Stepper::pressure_solve(std::span<const double> u_bar, Vec& p, std::span<const double> u_n) const {
  return solve_pressure_system(pressure_rhs(rest_residual(u_bar), u_n), p);
}

Vec Stepper::velocity_update(std::span<const double> u_n, std::span<const double> u_bar,
                             std::span<const double> p) const {
  Vec r = rest_residual(u_bar) + pressure_functional(p);
  ctx_->space().mass_solve(Slot::V1, r);
  ctx_->apply_pn(r);
  Vec u(u_n.begin(), u_n.end());
  axpy(-cfg_.dt, r, u);
  if (!all_finite(u)) fail(ErrorCode::NumericalBreakdown, "velocity update produced non-finite values");
  return u;
}

StepResult Stepper::cn_step(std::span<const double> u_n) {
  const MultipatchSpace& s = ctx_->space();
  require(static_cast<int>(u_n.size()) == s.dim(Slot::V1), ErrorCode::IncompatibleOperands,
          "cn_step: velocity size mismatch");
  StepResult res;
  res.report.dt_used = cfg_.dt;
  const double norm_n = m1_norm(u_n);
  Vec u_r(u_n.begin(), u_n.end()), u_bar(u_n.size());
  Vec p = p_warm_;
  for (int r = 0; r < cfg_.picard_max_iter; ++r) {
    for (size_t i = 0; i < u_bar.size(); ++i) u_bar[i] = 0.5 * (u_r[i] + u_n[i]);
    // the rest residual is shared between the pressure and velocity solves
    Vec rest = rest_residual(u_bar);
    Vec rhs = pressure_rhs(rest, u_n);
    try {
      res.report.pressure_solve = solve_pressure_system(std::move(rhs), p);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NumericalBreakdown) throw;
      fail(ErrorCode::StepFailure, std::string("pressure solve broke down: ") + e.what());
    }
    if (!res.report.pressure_solve.converged)
      fail(ErrorCode::StepFailure, "pressure solve did not converge (relative residual " +
                                       std::to_string(res.report.pressure_solve.residual) + ")");
    Vec upd = rest + pressure_functional(p);
    s.mass_solve(Slot::V1, upd);
    ctx_->apply_pn(upd);
    Vec u_new(u_n.begin(), u_n.end());
    axpy(-cfg_.dt, upd, u_new);
    const double delta = all_finite(u_new) ? m1_norm(u_new - u_r) : HUGE_VAL;
    const double scale = std::max(norm_n, m1_norm(u_new));
    if (!std::isfinite(delta) || delta > 1e6 * std::max(norm_n, 1.0))
      fail(ErrorCode::StepFailure, "Picard iteration diverged (update norm " + std::to_string(delta) + ")");
    u_r = std::move(u_new);
    res.report.picard_iterations = r + 1;
    res.report.final_update_norm = delta;
    if (delta <= cfg_.picard_tol * scale) {
      res.report.converged = true;
      break;
    }
  }
  if (!res.report.converged)
    fail(ErrorCode::StepFailure, "Picard iteration did not converge in " + std::to_string(cfg_.picard_max_iter) +
                                     " iterations (last update " + std::to_string(res.report.final_update_norm) +
                                     ")");
  p_warm_ = p;
  res.u = std::move(u_r);
  res.p = std::move(p);
  res.u_bar = std::move(u_bar);
  return res;
}

double Stepper::cfl_dt(std::span<const double> u) const {
  const QuadratureGrid& qg = ctx_->quad();
  Vec ux, uy;
  qg.eval_v1(u, ux, uy);
  double umax = 0.0;
  for (int q = 0; q < qg.size(); ++q) umax = std::max(umax, std::hypot(ux[q], uy[q]));
  const double h = ctx_->space().h_min();
  const double denom = cfg_.cfl_constant * (umax / h + cfg_.nu / (h * h));
  if (denom == 0.0) return cfg_.dt_max;
  return std::min(cfg_.dt_max, cfg_.cfl_safety / denom);
}

LinearSolveReport Stepper::leray_correction(Vec& u) const {
  const MultipatchSpace& s = ctx_->space();
  require(static_cast<int>(u.size()) == s.dim(Slot::V1), ErrorCode::IncompatibleOperands,
          "leray_correction: velocity size mismatch");
  if (ctx_->bounded()) ctx_->boundary()->impose_normal_data(u);
  Vec rhs = s.mass(Slot::V2).apply(s.div_h().apply(u));
  for (double& v : rhs) v = -v;
  Vec phi(s.dim(Slot::V2), 0.0);
  LinearSolveReport rep = solve_pressure_system(std::move(rhs), phi);
  if (!rep.converged) fail(ErrorCode::StepFailure, "divergence correction did not converge");
  Vec g = pressure_functional(phi);
  s.mass_solve(Slot::V1, g);
  ctx_->apply_pn(g);
  axpy(-1.0, g, u);
  return rep;
}

}  // namespace feecns
