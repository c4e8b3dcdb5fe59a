#pragma once

#include <optional>
#include <span>

#include "core/solvers.hpp"
#include "multipatch/fields.hpp"
#include "operators/weak_operators.hpp"

namespace feecns {

struct StepperConfig {
  double dt = 1e-3;
  double picard_tol = 1e-8;  // relative to the M1 norm of u^n
  int picard_max_iter = 50;
  double cg_tol = 1e-10;
  int cg_max_iter = 10000;
  double pressure_eps = -1.0;  // < 0: automatic, only when the pressure has a constant kernel
  double nu = 0.0;
  double alpha = 0.0;
  double cfl_safety = 0.5;
  double cfl_constant = 1.0;
  double dt_max = 1.0;
};

void validate(const StepperConfig& cfg);

struct StepReport {
  int picard_iterations = 0;
  double final_update_norm = 0.0;
  LinearSolveReport pressure_solve;
  double dt_used = 0.0;
  bool converged = false;
};

struct StepResult {
  Vec u, p;
  Vec u_bar;  // midpoint field of the last Picard update
  StepReport report;
};

/// Crank-Nicolson time stepping with Picard iterations and a matrix-free pressure solve.
/// The velocity update is M1 u = M1 u^n - dt M1 Pn M1^{-1} R(u_bar, p) with
/// R = advection + nu viscous + alpha penalization + pressure - forcing (+ pressure boundary load).
class Stepper {
 public:
  Stepper(const OperatorContext& ctx, const StepperConfig& cfg, const VectorFunction& forcing = {});

  const OperatorContext& context() const { return *ctx_; }
  const StepperConfig& config() const { return cfg_; }
  void set_dt(double dt);

  // Every residual term except the pressure, as a V1 functional.
  Vec rest_residual(std::span<const double> u_bar) const;
  // -Pn div_h^T M2 p
  Vec pressure_functional(std::span<const double> p) const;
  // A p = M2 div_h Pn M1^{-1} Pn div_h^T M2 p (+ eps M2 p)
  void apply_pressure_operator(std::span<const double> p, std::span<double> out) const;
  double pressure_eps() const { return eps_; }

  // Pressure of the midpoint field; `p` holds the initial guess and receives the solution.
  // With u_n the solve also removes the divergence of u_n (zero in exact arithmetic).
  LinearSolveReport pressure_solve(std::span<const double> u_bar, Vec& p, std::span<const double> u_n = {}) const;
  Vec velocity_update(std::span<const double> u_n, std::span<const double> u_bar, std::span<const double> p) const;
  // Throws StepFailure when Picard or the pressure solve does not converge.
  StepResult cn_step(std::span<const double> u_n);

  double cfl_dt(std::span<const double> u) const;
  // Imposes normal boundary data, then removes the discrete divergence.
  LinearSolveReport leray_correction(Vec& u) const;

  double m1_norm(std::span<const double> v) const;

 private:
  const OperatorContext* ctx_;
  StepperConfig cfg_;
  Vec forcing_;  // Pc1^T (integral of f . Lambda)
  Vec ones2_;    // V2 coefficients of the constant 1
  double eps_ = 0.0;
  Vec p_warm_;

  LinearSolveReport solve_pressure_system(Vec rhs, Vec& p) const;
  Vec pressure_rhs(std::span<const double> rest, std::span<const double> u_n) const;
};

}  // namespace feecns
