#include "spline/derham_patch.hpp"

#include "core/errors.hpp"

namespace feecns {

namespace {

void append(TripletBuilder& t, const SparseMatrix& m, int r0, int c0, double scale = 1.0) {
  for (int r = 0; r < m.rows(); ++r)
    for (int k = m.row_ptr()[r]; k < m.row_ptr()[r + 1]; ++k)
      t.add(r0 + r, c0 + m.col_idx()[k], scale * m.values()[k]);
}

}  // namespace

std::shared_ptr<const DirectionFactors> build_direction_factors(int p, int n_cells, double a, double b,
                                                                bool periodic) {
  require(p >= 0, ErrorCode::InvalidArgument, "de Rham patch: degree must be >= 0");
  auto f = std::make_shared<DirectionFactors>();
  f->high = SplineSpace1D(p + 1, n_cells, a, b, periodic);
  f->low = SplineSpace1D(p, n_cells, a, b, periodic);
  const int nq = bilinear_quadrature_points(p);
  f->d = derivative_incidence_1d(f->high, f->low);
  f->m_high = mass_1d(f->high, nq);
  f->m_low = mass_1d(f->low, nq);
  f->m_low_high = mixed_mass_1d(f->low, f->high, nq);
  f->chol_high = EnvelopeCholesky(f->m_high);
  f->chol_low = EnvelopeCholesky(f->m_low);
  const int nt = trilinear_quadrature_points(p);
  f->tab_high = make_basis_table(f->high, nt);
  f->tab_low = make_basis_table(f->low, nt);
  return f;
}

DeRhamPatch build_derham_patch(int kx, int ky, const PatchMap& map, std::shared_ptr<const DirectionFactors> fx,
                               std::shared_ptr<const DirectionFactors> fy) {
  require(map.hx > 0.0 && map.hy > 0.0, ErrorCode::InvalidArgument, "de Rham patch: map scales must be positive");
  DeRhamPatch P;
  P.kx = kx;
  P.ky = ky;
  P.map = map;
  P.fx = std::move(fx);
  P.fy = std::move(fy);
  const DirectionFactors& X = *P.fx;
  const DirectionFactors& Y = *P.fy;

  SparseMatrix ihx = SparseMatrix::identity(X.high.dim());
  SparseMatrix ihy = SparseMatrix::identity(Y.high.dim());
  SparseMatrix ilx = SparseMatrix::identity(X.low.dim());
  SparseMatrix ily = SparseMatrix::identity(Y.low.dim());

  {
    TripletBuilder t(P.dim1(), P.dim0());
    append(t, kron(ihx, Y.d), 0, 0);
    append(t, kron(X.d, ihy), P.dim1x(), 0, -1.0);
    P.curl = t.build();
  }
  {
    TripletBuilder t(P.dim2(), P.dim1());
    append(t, kron(X.d, ily), 0, 0);
    append(t, kron(ilx, Y.d), 0, P.dim1x());
    P.div = t.build();
  }
  P.m0 = kron(X.m_high, Y.m_high);
  SparseMatrix m1x = kron(X.m_high, Y.m_low);
  SparseMatrix m1y = kron(X.m_low, Y.m_high);
  P.m1 = block_diagonal({&m1x, &m1y});
  P.m2 = kron(X.m_low, Y.m_low);
  {
    TripletBuilder t(P.dim2(), P.dim1());
    append(t, kron(X.m_low_high, Y.m_low), 0, 0);
    P.b1 = t.build();
  }
  {
    TripletBuilder t(P.dim2(), P.dim1());
    append(t, kron(X.m_low, Y.m_low_high), 0, P.dim1x());
    P.b2 = t.build();
  }
  return P;
}

}  // namespace feecns
