#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "multipatch/fields.hpp"
#include "operators/weak_operators.hpp"

namespace feecns {

struct DiagnosticsRecord {
  double time = 0.0;
  double energy = 0.0;  // half the integral of |u|^2
  std::array<double, 2> momentum{0.0, 0.0};
  double div_l2 = 0.0;          // L2 norm of div(Pc1 u)
  double jump_energy = 0.0;     // integral of |(I - Pc1) u|^2
  double enstrophy_term = 0.0;  // d_h(u, u)
  int picard_iterations = 0;
};

DiagnosticsRecord measure(const OperatorContext& ctx, std::span<const double> u, double time = 0.0,
                          int picard_iterations = 0);

// Weak curl of u, with tangential boundary data in bounded mode.
Vec vorticity(const OperatorContext& ctx, std::span<const double> u);

// sqrt of the integral of |u - exact|^2 by the elevated quadrature.
double l2_error(const OperatorContext& ctx, std::span<const double> u, const VectorFunction& exact);
double l2_error(const OperatorContext& ctx, Slot slot, std::span<const double> c, const ScalarFunction& exact);

// Least-squares slope of log e against log h.
double convergence_order(const std::vector<std::pair<double, double>>& samples);

}  // namespace feecns
