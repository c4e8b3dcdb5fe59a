#pragma once

#include <vector>

namespace feecns {

/// Gauss-Legendre rule on [-1, 1].
struct QuadratureRule {
  std::vector<double> points;
  std::vector<double> weights;
  int size() const { return static_cast<int>(points.size()); }
};

// n-point rule, exact for polynomials of degree 2n - 1.
QuadratureRule gauss_legendre(int n);

// Points per cell for bilinear forms of a degree-p scheme.
inline int bilinear_quadrature_points(int p) { return p + 3; }
// Points per cell for triple products of degree p + 1 splines.
inline int trilinear_quadrature_points(int p) { return (3 * (p + 1) + 2 + 1) / 2 + 1; }

}  // namespace feecns
