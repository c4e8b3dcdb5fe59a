#include "multipatch/quadrature_grid.hpp"

#include <algorithm>

#include "core/errors.hpp"

namespace feecns {

namespace {

struct Factor {
  const SplineSpace1D* s;
  const BasisTable* t;
};

Factor high(const DirectionFactors& f) { return {&f.high, &f.tab_high}; }
Factor low(const DirectionFactors& f) { return {&f.low, &f.tab_low}; }

// out[qx * NQy + qy] = sum c[ix * ny + iy] X_ix(qx) Y_iy(qy)
void tensor_eval(Factor X, Factor Y, const double* c, double* out, Vec& work) {
  const int nx = X.s->dim(), ny = Y.s->dim();
  const int nqx = X.t->n_points(), nqy = Y.t->n_points();
  const int wx = X.t->width, wy = Y.t->width;
  work.assign(static_cast<size_t>(nx) * nqy, 0.0);
  for (int ix = 0; ix < nx; ++ix) {
    const double* row = c + static_cast<size_t>(ix) * ny;
    double* t = &work[static_cast<size_t>(ix) * nqy];
    for (int qy = 0; qy < nqy; ++qy) {
      const int cy = Y.t->first(qy);
      const double* v = &Y.t->values[static_cast<size_t>(qy) * wy];
      double s = 0.0;
      for (int a = 0; a < wy; ++a) s += row[Y.s->index(cy, a)] * v[a];
      t[qy] = s;
    }
  }
  for (int qx = 0; qx < nqx; ++qx) {
    const int cx = X.t->first(qx);
    const double* v = &X.t->values[static_cast<size_t>(qx) * wx];
    double* o = out + static_cast<size_t>(qx) * nqy;
    std::fill(o, o + nqy, 0.0);
    for (int a = 0; a < wx; ++a) {
      const double* t = &work[static_cast<size_t>(X.s->index(cx, a)) * nqy];
      const double va = v[a];
      for (int qy = 0; qy < nqy; ++qy) o[qy] += va * t[qy];
    }
  }
}

// out[ix * ny + iy] += sum_q g[qx * NQy + qy] X_ix(qx) Y_iy(qy)
void tensor_integrate(Factor X, Factor Y, const double* g, double* out, Vec& work) {
  const int nx = X.s->dim(), ny = Y.s->dim();
  const int nqx = X.t->n_points(), nqy = Y.t->n_points();
  const int wx = X.t->width, wy = Y.t->width;
  work.assign(static_cast<size_t>(nx) * nqy, 0.0);
  for (int qx = 0; qx < nqx; ++qx) {
    const int cx = X.t->first(qx);
    const double* v = &X.t->values[static_cast<size_t>(qx) * wx];
    const double* gq = g + static_cast<size_t>(qx) * nqy;
    for (int a = 0; a < wx; ++a) {
      double* t = &work[static_cast<size_t>(X.s->index(cx, a)) * nqy];
      const double va = v[a];
      for (int qy = 0; qy < nqy; ++qy) t[qy] += va * gq[qy];
    }
  }
  for (int ix = 0; ix < nx; ++ix) {
    double* row = out + static_cast<size_t>(ix) * ny;
    const double* t = &work[static_cast<size_t>(ix) * nqy];
    for (int qy = 0; qy < nqy; ++qy) {
      const int cy = Y.t->first(qy);
      const double* v = &Y.t->values[static_cast<size_t>(qy) * wy];
      for (int a = 0; a < wy; ++a) row[Y.s->index(cy, a)] += t[qy] * v[a];
    }
  }
}

}  // namespace

QuadratureGrid::QuadratureGrid(const MultipatchSpace& space) : space_(&space) {
  const DeRhamPatch& P0 = space.patch(0);
  nqx_ = P0.fx->tab_high.n_points();
  nqy_ = P0.fy->tab_high.n_points();
  const int n = size();
  x_.resize(n);
  y_.resize(n);
  w_.resize(n);
  for (int k = 0; k < space.n_patches(); ++k) {
    const DeRhamPatch& P = space.patch(k);
    const BasisTable& tx = P.fx->tab_high;
    const BasisTable& ty = P.fy->tab_high;
    for (int qx = 0; qx < nqx_; ++qx)
      for (int qy = 0; qy < nqy_; ++qy) {
        int q = k * points_per_patch() + qx * nqy_ + qy;
        x_[q] = tx.x[qx];
        y_[q] = ty.x[qy];
        w_[q] = tx.w[qx] * ty.w[qy];
      }
  }
}

void QuadratureGrid::eval_v1(std::span<const double> c, Vec& ux, Vec& uy) const {
  require(static_cast<int>(c.size()) == space_->dim(Slot::V1), ErrorCode::IncompatibleOperands,
          "eval_v1: wrong coefficient size");
  ux.resize(size());
  uy.resize(size());
  Vec work;
  for (int k = 0; k < space_->n_patches(); ++k) {
    const DeRhamPatch& P = space_->patch(k);
    const double* base = c.data() + space_->offset(Slot::V1, k);
    double* ox = ux.data() + static_cast<size_t>(k) * points_per_patch();
    double* oy = uy.data() + static_cast<size_t>(k) * points_per_patch();
    tensor_eval(high(*P.fx), low(*P.fy), base, ox, work);
    tensor_eval(low(*P.fx), high(*P.fy), base + P.dim1x(), oy, work);
  }
}

void QuadratureGrid::eval_scalar(Slot s, std::span<const double> c, Vec& out) const {
  require(s != Slot::V1, ErrorCode::InvalidArgument, "eval_scalar: V1 is vector valued");
  require(static_cast<int>(c.size()) == space_->dim(s), ErrorCode::IncompatibleOperands,
          "eval_scalar: wrong coefficient size");
  out.resize(size());
  Vec work;
  for (int k = 0; k < space_->n_patches(); ++k) {
    const DeRhamPatch& P = space_->patch(k);
    const double* base = c.data() + space_->offset(s, k);
    double* o = out.data() + static_cast<size_t>(k) * points_per_patch();
    if (s == Slot::V0)
      tensor_eval(high(*P.fx), high(*P.fy), base, o, work);
    else
      tensor_eval(low(*P.fx), low(*P.fy), base, o, work);
  }
}

Vec QuadratureGrid::integrate_v1(std::span<const double> fx, std::span<const double> fy) const {
  Vec out(space_->dim(Slot::V1), 0.0);
  Vec work, g(points_per_patch());
  for (int k = 0; k < space_->n_patches(); ++k) {
    const DeRhamPatch& P = space_->patch(k);
    double* base = out.data() + space_->offset(Slot::V1, k);
    const size_t o = static_cast<size_t>(k) * points_per_patch();
    for (int q = 0; q < points_per_patch(); ++q) g[q] = w_[o + q] * fx[o + q];
    tensor_integrate(high(*P.fx), low(*P.fy), g.data(), base, work);
    for (int q = 0; q < points_per_patch(); ++q) g[q] = w_[o + q] * fy[o + q];
    tensor_integrate(low(*P.fx), high(*P.fy), g.data(), base + P.dim1x(), work);
  }
  return out;
}

Vec QuadratureGrid::integrate_scalar(Slot s, std::span<const double> f) const {
  require(s != Slot::V1, ErrorCode::InvalidArgument, "integrate_scalar: V1 is vector valued");
  Vec out(space_->dim(s), 0.0);
  Vec work, g(points_per_patch());
  for (int k = 0; k < space_->n_patches(); ++k) {
    const DeRhamPatch& P = space_->patch(k);
    double* base = out.data() + space_->offset(s, k);
    const size_t o = static_cast<size_t>(k) * points_per_patch();
    for (int q = 0; q < points_per_patch(); ++q) g[q] = w_[o + q] * f[o + q];
    if (s == Slot::V0)
      tensor_integrate(high(*P.fx), high(*P.fy), g.data(), base, work);
    else
      tensor_integrate(low(*P.fx), low(*P.fy), g.data(), base, work);
  }
  return out;
}

}  // namespace feecns
