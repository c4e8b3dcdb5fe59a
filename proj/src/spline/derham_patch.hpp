#pragma once

#include <memory>

#include "core/solvers.hpp"
#include "core/sparse_matrix.hpp"
#include "spline/spline_space_1d.hpp"

namespace feecns {

/// Axis-aligned affine map phi(xi, eta) = (hx * xi + bx, hy * eta + by) from the unit square.
struct PatchMap {
  double hx = 1.0, hy = 1.0, bx = 0.0, by = 0.0;
  double jacobian() const { return hx * hy; }
};

/// One direction of a patch: the S_{p+1}, S_p pair with its 1D matrices.
/// Bases are the push-forwards of the reference B-splines rescaled to physical coordinates,
/// so all Jacobian factors live in the quadrature weights and in the 1/h of the incidence.
struct DirectionFactors {
  SplineSpace1D high, low;  // degrees p + 1 and p
  SparseMatrix d;           // d/dx : high -> low
  SparseMatrix m_high, m_low;
  SparseMatrix m_low_high;  // integral of low_i * high_j
  EnvelopeCholesky chol_high, chol_low;
  BasisTable tab_high, tab_low;  // at the trilinear rule
};

std::shared_ptr<const DirectionFactors> build_direction_factors(int p, int n_cells, double a, double b,
                                                                bool periodic);

/// Tensor-product de Rham sequence on one patch:
/// V0 = H x H, V1 = (H x L) x (L x H), V2 = L x L with H = S_{p+1}, L = S_p.
/// Curl q = (d2 q, -d1 q), Div v = d1 v1 + d2 v2.
struct DeRhamPatch {
  int kx = 0, ky = 0;
  PatchMap map;
  std::shared_ptr<const DirectionFactors> fx, fy;

  int dim0() const { return fx->high.dim() * fy->high.dim(); }
  int dim1x() const { return fx->high.dim() * fy->low.dim(); }
  int dim1y() const { return fx->low.dim() * fy->high.dim(); }
  int dim1() const { return dim1x() + dim1y(); }
  int dim2() const { return fx->low.dim() * fy->low.dim(); }

  SparseMatrix curl, div;  // V0 -> V1, V1 -> V2
  SparseMatrix m0, m1, m2;
  SparseMatrix b1, b2;  // V1 -> V2 mixed matrices
};

DeRhamPatch build_derham_patch(int kx, int ky, const PatchMap& map, std::shared_ptr<const DirectionFactors> fx,
                               std::shared_ptr<const DirectionFactors> fy);

}  // namespace feecns
