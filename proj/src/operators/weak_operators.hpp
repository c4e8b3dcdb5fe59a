#pragma once

#include <span>

#include "operators/operator_context.hpp"

namespace feecns {

// All operators act on coefficient vectors of the (broken) spaces of ctx.space().
// "Dual" vectors are functionals: entry j is the value on the basis function j.

// Boundaryless weak gradient: M1 x = -div_h^T M2 q.
Vec weak_grad(const OperatorContext& ctx, std::span<const double> q);
// Weak gradient with the boundary integral of q (v . n); equals weak_grad in periodic mode.
Vec weak_grad_full(const OperatorContext& ctx, std::span<const double> q);
// M1 x = -(div_h Pn)^T M2 q + integral over the pressure boundary of p_b (Lambda . n). Bounded mode.
Vec weak_grad_with_pressure_bc(const OperatorContext& ctx, std::span<const double> q);

// Boundaryless weak curl: M0 w = curl_h^T M1 v.
Vec weak_curl(const OperatorContext& ctx, std::span<const double> v);
// Weak curl with tangential data; equals weak_curl in periodic mode.
Vec weak_curl_with_tangential_bc(const OperatorContext& ctx, std::span<const double> v);

// L2 projection of the k-th component (k = 0, 1) onto V2.
Vec interior_product(const OperatorContext& ctx, std::span<const double> u, int k);

// Trilinear advection form c_h(u, v, w) evaluated by quadrature.
double advection_form(const OperatorContext& ctx, std::span<const double> u, std::span<const double> v,
                      std::span<const double> w);
// r_j = c_h(u, v, Lambda_j).
Vec advection_residual(const OperatorContext& ctx, std::span<const double> u, std::span<const double> v);

// Viscous form d_h(u, v) (tangential data enters the trial side in bounded mode).
double viscous_form(const OperatorContext& ctx, std::span<const double> u, std::span<const double> v);
// r_j = d_h(u, Lambda_j) = (M1 curl_h w)_j with w the weak curl of u.
Vec viscous_residual(const OperatorContext& ctx, std::span<const double> u);

// (I - Pc1)^T M1 (I - Pc1) u
Vec apply_penalization(const OperatorContext& ctx, std::span<const double> u);

}  // namespace feecns
