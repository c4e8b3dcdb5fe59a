#include "operators/boundary.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace feecns {

const char* edge_name(Edge e) {
  switch (e) {
    case Edge::Left: return "left";
    case Edge::Right: return "right";
    case Edge::Bottom: return "bottom";
    case Edge::Top: return "top";
  }
  return "?";
}

const char* kind_name(BoundaryKind k) {
  switch (k) {
    case BoundaryKind::NoSlip: return "no_slip";
    case BoundaryKind::Velocity: return "velocity";
    case BoundaryKind::Slip: return "slip";
    case BoundaryKind::Pressure: return "pressure";
    case BoundaryKind::PressureNormal: return "pressure_normal";
  }
  return "?";
}

BoundaryKind parse_kind(const std::string& s) {
  for (BoundaryKind k : {BoundaryKind::NoSlip, BoundaryKind::Velocity, BoundaryKind::Slip, BoundaryKind::Pressure,
                         BoundaryKind::PressureNormal})
    if (s == kind_name(k)) return k;
  fail(ErrorCode::ConfigError, "unknown boundary kind '" + s + "'");
}

std::array<double, 2> edge_normal(Edge e) {
  switch (e) {
    case Edge::Left: return {-1.0, 0.0};
    case Edge::Right: return {1.0, 0.0};
    case Edge::Bottom: return {0.0, -1.0};
    case Edge::Top: return {0.0, 1.0};
  }
  return {0.0, 0.0};
}

namespace {

constexpr Edge kEdges[] = {Edge::Left, Edge::Right, Edge::Bottom, Edge::Top};

bool vertical(Edge e) { return e == Edge::Left || e == Edge::Right; }

bool edge_exists(const GridSpec& g, Edge e) { return vertical(e) ? !g.periodic_x : !g.periodic_y; }

// Patches along an edge, in increasing edge coordinate.
std::vector<int> edge_patches(const MultipatchSpace& s, Edge e) {
  const GridSpec& g = s.grid();
  std::vector<int> out;
  switch (e) {
    case Edge::Left:
      for (int ky = 0; ky < g.patches_y; ++ky) out.push_back(s.patch_index(0, ky));
      break;
    case Edge::Right:
      for (int ky = 0; ky < g.patches_y; ++ky) out.push_back(s.patch_index(g.patches_x - 1, ky));
      break;
    case Edge::Bottom:
      for (int kx = 0; kx < g.patches_x; ++kx) out.push_back(s.patch_index(kx, 0));
      break;
    case Edge::Top:
      for (int kx = 0; kx < g.patches_x; ++kx) out.push_back(s.patch_index(kx, g.patches_y - 1));
      break;
  }
  return out;
}

BoundaryKind kind_at(const EdgeCondition& ec, double s) {
  for (const BoundarySegment& seg : ec.segments)
    if (s >= seg.a && s <= seg.b) return seg.kind;
  fail(ErrorCode::ConfigError, "boundary segment lookup failed");
}

// Index helpers: on vertical edges the across direction is x, else y.
struct EdgeGeometry {
  const DirectionFactors* along;
  const DirectionFactors* across;
  double xb;  // boundary coordinate in the across direction
  bool vert;
  // tensor index from (across, along) local indices, with the y-direction dimension n_y
  int index(int across_i, int along_i, int n_y) const {
    return vert ? across_i * n_y + along_i : along_i * n_y + across_i;
  }
};

EdgeGeometry geometry(const DeRhamPatch& P, Edge e) {
  EdgeGeometry g;
  g.vert = vertical(e);
  g.along = g.vert ? P.fy.get() : P.fx.get();
  g.across = g.vert ? P.fx.get() : P.fy.get();
  g.xb = (e == Edge::Left || e == Edge::Bottom) ? g.across->high.a() : g.across->high.b();
  return g;
}

}  // namespace

void validate_boundary(const MultipatchSpace& space, const BoundarySpec& spec) {
  const GridSpec& g = space.grid();
  for (Edge e : kEdges) {
    const EdgeCondition& ec = spec[e];
    const std::string name = edge_name(e);
    if (!edge_exists(g, e)) {
      if (!ec.segments.empty())
        fail(ErrorCode::ConfigError, "boundary: edge " + name + " lies in a periodic direction");
      continue;
    }
    if (ec.segments.empty()) fail(ErrorCode::ConfigError, "boundary: edge " + name + " has no condition");
    const double lo = vertical(e) ? g.y0 : g.x0, hi = vertical(e) ? g.y1 : g.x1;
    const int n_cells = vertical(e) ? g.patches_y * g.cells_y : g.patches_x * g.cells_x;
    const double h = (hi - lo) / n_cells, tol = 1e-9 * (hi - lo);
    std::vector<BoundarySegment> segs = ec.segments;
    std::sort(segs.begin(), segs.end(), [](const auto& a, const auto& b) { return a.a < b.a; });
    double cursor = lo;
    for (const BoundarySegment& s : segs) {
      if (!(s.b > s.a)) fail(ErrorCode::ConfigError, "boundary: empty segment on edge " + name);
      if (std::abs(s.a - cursor) > tol)
        fail(ErrorCode::ConfigError, "boundary: segments on edge " + name + " must cover it without gaps or overlaps");
      double cells = (s.b - lo) / h;
      if (std::abs(cells - std::round(cells)) > 1e-9)
        fail(ErrorCode::ConfigError, "boundary: breakpoint " + std::to_string(s.b) + " on edge " + name +
                                         " is not a cell boundary");
      cursor = s.b;
    }
    if (std::abs(cursor - hi) > tol) fail(ErrorCode::ConfigError, "boundary: edge " + name + " is not fully covered");
  }
}

BoundaryOperators::BoundaryOperators(const MultipatchSpace& space, const BoundarySpec& spec)
    : space_(&space), spec_(spec) {
  validate_boundary(space, spec);
  const int n0 = space.dim(Slot::V0), n1 = space.dim(Slot::V1), n2 = space.dim(Slot::V2);
  pn_diag_.assign(n1, 1.0);
  pressure_load_.assign(n1, 0.0);
  tangent_load_.assign(n0, 0.0);
  TripletBuilder grad(n1, n2), curl(n0, n1);

  const int n_pts = trilinear_quadrature_points(space.degree());
  double vch[32], vcl[32];
  for (Edge e : kEdges) {
    if (!edge_exists(space.grid(), e)) continue;
    const EdgeCondition& ec = spec_[e];
    const auto n = edge_normal(e);
    for (int k : edge_patches(space, e)) {
      const DeRhamPatch& P = space.patch(k);
      const EdgeGeometry eg = geometry(P, e);
      const SplineSpace1D &AH = eg.along->high, &AL = eg.along->low, &CH = eg.across->high, &CL = eg.across->low;
      const int cc = CH.cell_of(eg.xb);
      CH.values(cc, eg.xb, vch);
      CL.values(cc, eg.xb, vcl);
      const int o0 = space.offset(Slot::V0, k), o1 = space.offset(Slot::V1, k), o2 = space.offset(Slot::V2, k);
      // V1 normal and tangential components: the normal one is x on vertical edges
      const int o_norm = eg.vert ? o1 : o1 + P.dim1x();
      const int o_tan = eg.vert ? o1 + P.dim1x() : o1;
      const int ny_norm = eg.vert ? AL.dim() : CH.dim();
      const int ny_tan = eg.vert ? AH.dim() : CL.dim();
      const int ny2 = eg.vert ? AL.dim() : CL.dim();
      const int ny0 = eg.vert ? AH.dim() : CH.dim();
      const double n_norm = eg.vert ? n[0] : n[1];
      // Lambda x n = L_x n_y - L_y n_x
      const double t_sign = eg.vert ? -n[0] : n[1];
      const int ib = (e == Edge::Left || e == Edge::Bottom) ? 0 : CH.dim() - 1;

      EdgeCells cells{e, k, {}};
      const BasisTable &tab_l = eg.along->tab_low, &tab_h = eg.along->tab_high;
      for (int c = 0; c < AL.n_cells(); ++c) {
        const double mid = AL.a() + (c + 0.5) * AL.h();
        const BoundaryKind kind = kind_at(ec, mid);
        cells.kinds.push_back(kind);
        if (is_normal(kind)) {
          has_normal_ = true;
          for (int r = 0; r <= AL.degree(); ++r)
            pn_diag_[o_norm + eg.index(ib, AL.index(c, r), ny_norm)] = 0.0;
        } else {
          has_pressure_ = true;
        }
        const double ut = kind == BoundaryKind::NoSlip ? 0.0 : ec.velocity[0] * n[1] - ec.velocity[1] * n[0];
        for (int q = c * n_pts; q < (c + 1) * n_pts; ++q) {
          const double s = tab_l.x[q], w = tab_l.w[q];
          const double* al = &tab_l.values[q * tab_l.width];
          const double* ah = &tab_h.values[q * tab_h.width];
          points_.push_back(BoundaryPoint{e, k, kind, eg.vert ? eg.xb : s, eg.vert ? s : eg.xb, w});
          // normal trace of V1 against V2
          for (int a = 0; a <= CH.degree(); ++a)
            for (int r = 0; r <= AL.degree(); ++r) {
              const double vn = vch[a] * al[r] * n_norm;
              if (vn == 0.0) continue;
              const int j = o_norm + eg.index(CH.index(cc, a), AL.index(c, r), ny_norm);
              if (kind == BoundaryKind::Pressure || kind == BoundaryKind::PressureNormal)
                pressure_load_[j] += w * ec.pressure * vn;
              for (int b = 0; b <= CL.degree(); ++b)
                for (int r2 = 0; r2 <= AL.degree(); ++r2) {
                  const double v2 = vcl[b] * al[r2];
                  if (v2 != 0.0) grad.add(j, o2 + eg.index(CL.index(cc, b), AL.index(c, r2), ny2), w * vn * v2);
                }
            }
          // V0 values
          for (int a = 0; a <= CH.degree(); ++a)
            for (int r = 0; r <= AH.degree(); ++r) {
              const double v0 = vch[a] * ah[r];
              if (v0 == 0.0) continue;
              const int i = o0 + eg.index(CH.index(cc, a), AH.index(c, r), ny0);
              if (is_tangential(kind)) {
                tangent_load_[i] += w * ut * v0;
                continue;
              }
              // tangential trace of V1 (the normal component has no tangential part)
              for (int b = 0; b <= CL.degree(); ++b)
                for (int r2 = 0; r2 <= AH.degree(); ++r2) {
                  const double vt = vcl[b] * ah[r2] * t_sign;
                  if (vt != 0.0) curl.add(i, o_tan + eg.index(CL.index(cc, b), AH.index(c, r2), ny_tan), w * vt * v0);
                }
            }
        }
      }
      edge_cells_.push_back(std::move(cells));
    }
  }
  pn_ = SparseMatrix::diagonal(pn_diag_);
  // Where an edge switches from a normal to a pressure segment, flux functions straddle both;
  // testing the load against Pn keeps the pressure gradient in the range of Pn^T.
  apply_pn(pressure_load_);
  grad_bnd_ = grad.build();
  curl_bnd_ = curl.build();
}

void BoundaryOperators::apply_pn(std::span<double> v) const {
  require(v.size() == pn_diag_.size(), ErrorCode::IncompatibleOperands, "apply_pn: size mismatch");
  for (size_t i = 0; i < v.size(); ++i) v[i] *= pn_diag_[i];
}

void BoundaryOperators::impose_normal_data(std::span<double> u) const {
  require(u.size() == pn_diag_.size(), ErrorCode::IncompatibleOperands, "impose_normal_data: size mismatch");
  const int n_pts = trilinear_quadrature_points(space_->degree());
  for (const EdgeCells& ec_cells : edge_cells_) {
    const Edge e = ec_cells.edge;
    if (std::none_of(ec_cells.kinds.begin(), ec_cells.kinds.end(), is_normal)) continue;
    const EdgeCondition& ec = spec_[e];
    const DeRhamPatch& P = space_->patch(ec_cells.patch);
    const EdgeGeometry eg = geometry(P, e);
    const SplineSpace1D &AL = eg.along->low, &CH = eg.across->high;
    const int o_norm = space_->offset(Slot::V1, ec_cells.patch) + (eg.vert ? 0 : P.dim1x());
    const int ny_norm = eg.vert ? AL.dim() : CH.dim();
    const int ib = (e == Edge::Left || e == Edge::Bottom) ? 0 : CH.dim() - 1;  // the only nonzero across function
    const double data = eg.vert ? ec.velocity[0] : ec.velocity[1];
    Vec rhs(AL.dim(), 0.0);
    const BasisTable& t = eg.along->tab_low;
    for (int c = 0; c < AL.n_cells(); ++c) {
      const BoundaryKind kind = ec_cells.kinds[c];
      for (int q = c * n_pts; q < (c + 1) * n_pts; ++q) {
        const double* v = &t.values[q * t.width];
        double g = 0.0;
        if (!is_normal(kind)) {
          for (int r = 0; r <= AL.degree(); ++r) g += v[r] * u[o_norm + eg.index(ib, AL.index(c, r), ny_norm)];
        } else if (kind != BoundaryKind::NoSlip) {
          g = data;
        }
        for (int r = 0; r <= AL.degree(); ++r) rhs[AL.index(c, r)] += t.w[q] * g * v[r];
      }
    }
    eg.along->chol_low.solve_in_place(rhs);
    for (int i = 0; i < AL.dim(); ++i) {
      const int j = o_norm + eg.index(ib, i, ny_norm);
      if (pn_diag_[j] == 0.0) u[j] = rhs[i];
    }
  }
}

}  // namespace feecns
