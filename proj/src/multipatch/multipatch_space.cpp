#include "multipatch/multipatch_space.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "core/dense.hpp"
#include "core/errors.hpp"

namespace feecns {

ProjectionStencil1D projection_stencil_1d(const SplineSpace1D& s, int radius, int moment_order) {
  require(!s.periodic(), ErrorCode::InvalidArgument, "projection stencil: patch space must be clamped");
  require(radius >= 0, ErrorCode::InvalidArgument, "projection stencil: radius must be >= 0");
  const int n_moments = std::max(moment_order + 1, 0);
  if (radius < n_moments)
    fail(ErrorCode::DegenerateStencil, "projection stencil: radius " + std::to_string(radius) +
                                           " cannot satisfy " + std::to_string(n_moments) + " moment conditions");
  if (radius > s.dim() - 2)
    fail(ErrorCode::DegenerateStencil, "projection stencil: radius " + std::to_string(radius) +
                                           " reaches the opposite patch boundary (dim " + std::to_string(s.dim()) +
                                           ")");
  ProjectionStencil1D st;
  st.radius = radius;
  st.c.assign(radius + 1, 0.0);
  st.c_prime.assign(radius + 1, 0.0);
  st.c[0] = st.c_prime[0] = 0.5;
  if (radius == 0) return st;

  // m[i][j] = integral over the patch of phi_i * ((x - a) / L)^j
  const double L = s.b() - s.a();
  const BasisTable t = make_basis_table(s, s.degree() + n_moments + 2);
  std::vector<std::vector<double>> m(radius + 1, std::vector<double>(std::max(n_moments, 1), 0.0));
  for (int q = 0; q < t.n_points(); ++q) {
    int cell = t.first(q);
    double xi = (t.x[q] - s.a()) / L;
    for (int r = 0; r < t.width; ++r) {
      int i = s.index(cell, r);
      if (i > radius) continue;
      double pw = 1.0;
      for (int j = 0; j < n_moments; ++j) {
        m[i][j] += t.w[q] * t.values[q * t.width + r] * pw;
        pw *= xi;
      }
    }
  }
  // rows j: sum_{i>=1} c_i m[i][j] = m[0][j] / 2
  std::vector<double> coef;
  if (radius == n_moments) {
    std::vector<double> a(radius * radius), b(radius);
    for (int j = 0; j < n_moments; ++j) {
      for (int i = 1; i <= radius; ++i) a[j * radius + (i - 1)] = m[i][j];
      b[j] = 0.5 * m[0][j];
    }
    if (!solve_dense(a, b, radius)) fail(ErrorCode::DegenerateStencil, "projection stencil: singular moment system");
    coef = b;
  } else {
    // minimum-norm solution c = A^T (A A^T)^{-1} b; no moments leaves c_i = 0
    coef.assign(radius, 0.0);
    if (n_moments > 0) {
      std::vector<double> g(n_moments * n_moments, 0.0), b(n_moments);
      for (int j = 0; j < n_moments; ++j) {
        b[j] = 0.5 * m[0][j];
        for (int l = 0; l < n_moments; ++l)
          for (int i = 1; i <= radius; ++i) g[j * n_moments + l] += m[i][j] * m[i][l];
      }
      if (!solve_dense(g, b, n_moments))
        fail(ErrorCode::DegenerateStencil, "projection stencil: singular moment system");
      for (int i = 1; i <= radius; ++i)
        for (int j = 0; j < n_moments; ++j) coef[i - 1] += m[i][j] * b[j];
    }
  }
  for (int i = 1; i <= radius; ++i) {
    st.c[i] = coef[i - 1];
    st.c_prime[i] = -coef[i - 1];
  }
  return st;
}

ProjectionStencil1D projection_stencil_1d(int degree, int n_cells, int radius, int moment_order) {
  return projection_stencil_1d(SplineSpace1D(degree, n_cells, 0.0, 1.0, false), radius, moment_order);
}

namespace {

using Column = std::vector<std::pair<int, double>>;

// Columns of the 1D broken conforming projection over np patches of dimension n each.
std::vector<Column> projection_columns_1d(int np, int n, bool wrap, const ProjectionStencil1D& st) {
  std::vector<Column> cols(static_cast<size_t>(np) * n);
  const int N = n - 1;
  for (int k = 0; k < np; ++k) {
    for (int i = 0; i < n; ++i) {
      Column& col = cols[k * n + i];
      bool left = i == 0 && np > 1 && (k > 0 || wrap);
      bool right = i == N && np > 1 && (k < np - 1 || wrap);
      if (left) {
        int kl = (k - 1 + np) % np;
        for (int r = 0; r <= st.radius; ++r) {
          col.push_back({k * n + r, st.c[r]});
          col.push_back({kl * n + N - r, st.c_prime[r]});
        }
      } else if (right) {
        int kr = (k + 1) % np;
        for (int r = 0; r <= st.radius; ++r) {
          col.push_back({k * n + N - r, st.c[r]});
          col.push_back({kr * n + r, st.c_prime[r]});
        }
      } else {
        col.push_back({k * n + i, 1.0});
      }
    }
  }
  return cols;
}

}  // namespace

MultipatchSpace::MultipatchSpace(const GridSpec& grid) : grid_(grid) {
  const int p = grid.degree;
  require(p >= 0, ErrorCode::InvalidArgument, "grid: degree must be >= 0");
  require(grid.patches_x >= 1 && grid.patches_y >= 1, ErrorCode::InvalidArgument, "grid: need at least one patch");
  require(grid.cells_x >= 1 && grid.cells_y >= 1, ErrorCode::InvalidArgument, "grid: need at least one cell");
  require(grid.x1 > grid.x0 && grid.y1 > grid.y0, ErrorCode::InvalidArgument, "grid: empty domain");
  moment_order_ = grid.moment_order.value_or(p);
  stencil_radius_ = grid.stencil_radius.value_or(std::max(moment_order_ + 1, 0));

  const int npx = grid.patches_x, npy = grid.patches_y;
  const double lx = (grid.x1 - grid.x0) / npx, ly = (grid.y1 - grid.y0) / npy;
  for (int kx = 0; kx < npx; ++kx) {
    double a = kx == 0 ? grid.x0 : grid.x0 + kx * lx;
    double b = kx == npx - 1 ? grid.x1 : grid.x0 + (kx + 1) * lx;
    fx_.push_back(build_direction_factors(p, grid.cells_x, a, b, grid.periodic_x && npx == 1));
  }
  for (int ky = 0; ky < npy; ++ky) {
    double a = ky == 0 ? grid.y0 : grid.y0 + ky * ly;
    double b = ky == npy - 1 ? grid.y1 : grid.y0 + (ky + 1) * ly;
    fy_.push_back(build_direction_factors(p, grid.cells_y, a, b, grid.periodic_y && npy == 1));
  }
  for (int s = 0; s < 3; ++s) offsets_[s].assign(npx * npy + 1, 0);
  for (int ky = 0; ky < npy; ++ky)
    for (int kx = 0; kx < npx; ++kx) {
      PatchMap map{fx_[kx]->high.b() - fx_[kx]->high.a(), fy_[ky]->high.b() - fy_[ky]->high.a(),
                   fx_[kx]->high.a(), fy_[ky]->high.a()};
      patches_.push_back(build_derham_patch(kx, ky, map, fx_[kx], fy_[ky]));
    }
  for (int k = 0; k < n_patches(); ++k) {
    offsets_[0][k + 1] = offsets_[0][k] + patches_[k].dim0();
    offsets_[1][k + 1] = offsets_[1][k] + patches_[k].dim1();
    offsets_[2][k + 1] = offsets_[2][k] + patches_[k].dim2();
  }
  for (int s = 0; s < 3; ++s) dims_[s] = offsets_[s][n_patches()];

  std::vector<const SparseMatrix*> blocks;
  auto gather = [&](auto member) {
    blocks.clear();
    for (const auto& P : patches_) blocks.push_back(&(P.*member));
    return block_diagonal(blocks);
  };
  mass_[0] = gather(&DeRhamPatch::m0);
  mass_[1] = gather(&DeRhamPatch::m1);
  mass_[2] = gather(&DeRhamPatch::m2);
  div_ = gather(&DeRhamPatch::div);
  curl_ = gather(&DeRhamPatch::curl);
  mixed_[0] = gather(&DeRhamPatch::b1);
  mixed_[1] = gather(&DeRhamPatch::b2);

  if (npx > 1) stencil_x_ = projection_stencil_1d(fx_[0]->high, stencil_radius_, moment_order_);
  if (npy > 1) stencil_y_ = projection_stencil_1d(fy_[0]->high, stencil_radius_, moment_order_);
  build_projections();
}

void MultipatchSpace::build_projections() {
  const int npx = grid_.patches_x, npy = grid_.patches_y;
  const int nhx = fx_[0]->high.dim(), nhy = fy_[0]->high.dim();
  const int nlx = fx_[0]->low.dim(), nly = fy_[0]->low.dim();
  auto cx = projection_columns_1d(npx, nhx, grid_.periodic_x, stencil_x_);
  auto cy = projection_columns_1d(npy, nhy, grid_.periodic_y, stencil_y_);

  TripletBuilder t0(dims_[0], dims_[0]), t1(dims_[1], dims_[1]);
  for (int ky = 0; ky < npy; ++ky)
    for (int kx = 0; kx < npx; ++kx) {
      const int k = patch_index(kx, ky);
      const int o0 = offsets_[0][k], o1 = offsets_[1][k];
      const int d1x = patches_[k].dim1x();
      for (int ix = 0; ix < nhx; ++ix)
        for (int iy = 0; iy < nhy; ++iy)
          for (auto [gx, vx] : cx[kx * nhx + ix])
            for (auto [gy, vy] : cy[ky * nhy + iy]) {
              int k2 = patch_index(gx / nhx, gy / nhy);
              t0.add(offsets_[0][k2] + (gx % nhx) * nhy + gy % nhy, o0 + ix * nhy + iy, vx * vy);
            }
      for (int ix = 0; ix < nhx; ++ix)
        for (int iy = 0; iy < nly; ++iy)
          for (auto [gx, vx] : cx[kx * nhx + ix]) {
            int k2 = patch_index(gx / nhx, ky);
            t1.add(offsets_[1][k2] + (gx % nhx) * nly + iy, o1 + ix * nly + iy, vx);
          }
      for (int ix = 0; ix < nlx; ++ix)
        for (int iy = 0; iy < nhy; ++iy)
          for (auto [gy, vy] : cy[ky * nhy + iy]) {
            int k2 = patch_index(kx, gy / nhy);
            t1.add(offsets_[1][k2] + d1x + ix * nhy + gy % nhy, o1 + d1x + ix * nhy + iy, vy);
          }
    }
  pc_[0] = t0.build();
  pc_[1] = t1.build();
  pc_[2] = SparseMatrix::identity(dims_[2]);
  div_h_ = multiply(div_, pc_[1]);
  curl_h_ = multiply(curl_, pc_[0]);
  SparseMatrix q = add(SparseMatrix::identity(dims_[1]), pc_[1], 1.0, -1.0);
  penalization_ = multiply(q.transpose(), multiply(mass_[1], q));
}

void MultipatchSpace::mass_solve(Slot s, std::span<double> x) const {
  require(static_cast<int>(x.size()) == dim(s), ErrorCode::IncompatibleOperands,
          std::string("mass_solve: wrong size for ") + slot_name(s));
  for (int k = 0; k < n_patches(); ++k) {
    const DeRhamPatch& P = patches_[k];
    double* base = x.data() + offset(s, k);
    switch (s) {
      case Slot::V0:
        KroneckerSolver(&P.fx->chol_high, &P.fy->chol_high).solve_in_place({base, size_t(P.dim0())});
        break;
      case Slot::V1:
        KroneckerSolver(&P.fx->chol_high, &P.fy->chol_low).solve_in_place({base, size_t(P.dim1x())});
        KroneckerSolver(&P.fx->chol_low, &P.fy->chol_high).solve_in_place({base + P.dim1x(), size_t(P.dim1y())});
        break;
      case Slot::V2:
        KroneckerSolver(&P.fx->chol_low, &P.fy->chol_low).solve_in_place({base, size_t(P.dim2())});
        break;
    }
  }
}

Vec MultipatchSpace::apply_mass_inverse(Slot s, std::span<const double> b) const {
  Vec x(b.begin(), b.end());
  mass_solve(s, std::span<double>(x));
  return x;
}

double MultipatchSpace::h_min() const {
  return std::min(fx_[0]->high.h(), fy_[0]->high.h());
}

int MultipatchSpace::locate(double x, double y) const {
  const double tol = 1e-12 * std::max(grid_.x1 - grid_.x0, grid_.y1 - grid_.y0);
  if (!(x >= grid_.x0 - tol && x <= grid_.x1 + tol && y >= grid_.y0 - tol && y <= grid_.y1 + tol))
    fail(ErrorCode::OutOfDomain, "point (" + std::to_string(x) + ", " + std::to_string(y) + ") is outside the domain");
  const double lx = (grid_.x1 - grid_.x0) / grid_.patches_x, ly = (grid_.y1 - grid_.y0) / grid_.patches_y;
  int kx = std::clamp(static_cast<int>(std::floor((x - grid_.x0) / lx)), 0, grid_.patches_x - 1);
  int ky = std::clamp(static_cast<int>(std::floor((y - grid_.y0) / ly)), 0, grid_.patches_y - 1);
  return patch_index(kx, ky);
}

Field MultipatchSpace::zero(Slot s) const { return Field{s, natural_conformity(), Vec(dim(s), 0.0)}; }

}  // namespace feecns
