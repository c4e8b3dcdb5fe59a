#include <cmath>
#include <numbers>
#include <random>

#include "core/errors.hpp"
#include "doctest.h"
#include "multipatch/fields.hpp"
#include "oracles.hpp"
#include "spline/derham_patch.hpp"
#include "spline/spline_space_1d.hpp"

using namespace feecns;

TEST_CASE("1D space dimensions and argument checks") {
  CHECK(SplineSpace1D(0, 4, 0, 1, false).dim() == 4);
  CHECK(SplineSpace1D(2, 4, 0, 1, false).dim() == 6);
  CHECK(SplineSpace1D(1, 8, 0, 1, true).dim() == 8);
  CHECK_THROWS_AS(SplineSpace1D(3, 3, 0, 1, true), Error);
  CHECK_THROWS_AS(SplineSpace1D(1, 0, 0, 1, false), Error);
}

TEST_CASE("basis values match the Cox-de Boor definition and form a partition of unity") {
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int p = 0; p <= 4; ++p)
    for (bool periodic : {false, true}) {
      if (periodic && p >= 5) continue;
      SplineSpace1D s(p, 5, -0.5, 1.5, periodic);
      for (int trial = 0; trial < 100; ++trial) {
        double x = -0.5 + 2.0 * u(rng);
        int c = s.cell_of(x);
        double v[32];
        s.values(c, x, v);
        double sum = 0.0;
        for (int r = 0; r <= p; ++r) {
          sum += v[r];
          CHECK(v[r] >= -1e-15);
        }
        CHECK(std::abs(sum - 1.0) < 1e-13);
        // reference value of each global function, summing periodic images
        std::vector<double> ref(s.dim(), 0.0);
        const int n_fun = static_cast<int>(s.knots().size()) - p - 1;
        for (int i = 0; i < n_fun; ++i) ref[periodic ? i % s.dim() : i] += oracle::bspline(s.knots(), i, p, x, true);
        std::vector<double> got(s.dim(), 0.0);
        for (int r = 0; r <= p; ++r) got[s.index(c, r)] += v[r];
        for (int i = 0; i < s.dim(); ++i) CHECK(std::abs(got[i] - ref[i]) < 1e-13);
      }
    }
}

TEST_CASE("derivative incidence") {
  SplineSpace1D h1(1, 6, 0.0, 1.5, false), l0(0, 6, 0.0, 1.5, false);
  SparseMatrix d = derivative_incidence_1d(h1, l0);
  const double h = 0.25;
  for (int m = 0; m < l0.dim(); ++m) {
    CHECK(std::abs(d.coeff(m, m) + 1.0 / h) < 1e-14);
    CHECK(std::abs(d.coeff(m, m + 1) - 1.0 / h) < 1e-14);
  }
  std::mt19937 rng(9);
  for (bool periodic : {false, true})
    for (int q = 1; q <= 4; ++q) {
      SplineSpace1D hi(q, 7, 0.3, 2.0, periodic), lo(q - 1, 7, 0.3, 2.0, periodic);
      SparseMatrix dm = derivative_incidence_1d(hi, lo);
      std::vector<double> ones(hi.dim(), 1.0);
      CHECK(norm_inf(dm.apply(ones)) < 1e-12);
      auto c = oracle::random_vector(hi.dim(), rng);
      auto dc = dm.apply(c);
      std::uniform_real_distribution<double> u(0.31, 1.99);
      for (int t = 0; t < 50; ++t) {
        double x = u(rng);
        int cell = hi.cell_of(x);
        double dv[32];
        hi.derivatives(cell, x, dv);
        double exact = 0.0;
        for (int r = 0; r <= q; ++r) exact += c[hi.index(cell, r)] * dv[r];
        CHECK(std::abs(lo.evaluate(dc, x) - exact) < 1e-12 * (1.0 + std::abs(exact)));
        double fd = (hi.evaluate(c, x + 1e-6) - hi.evaluate(c, x - 1e-6)) / 2e-6;
        if (hi.cell_of(x + 1e-6) == hi.cell_of(x - 1e-6) || q >= 2)
          CHECK(std::abs(fd - exact) < 1e-6 * (1.0 + std::abs(exact)));
      }
    }
  CHECK_THROWS_AS(derivative_incidence_1d(SplineSpace1D(0, 3, 0, 1, false), SplineSpace1D(0, 3, 0, 1, false)), Error);
}

namespace {

DeRhamPatch unit_patch(int p, int nx, int ny, bool periodic = false) {
  auto fx = build_direction_factors(p, nx, 0.0, 1.0, periodic);
  auto fy = build_direction_factors(p, ny, 0.0, 1.0, periodic);
  return build_derham_patch(0, 0, PatchMap{1.0, 1.0, 0.0, 0.0}, fx, fy);
}

}  // namespace

TEST_CASE("de Rham patch dimensions, exact complex, masses") {
  // two linear factors: V0 bilinear, V2 piecewise constant
  DeRhamPatch P = unit_patch(0, 2, 2);
  CHECK(P.dim2() == 4);
  CHECK(P.dim1() == 12);
  CHECK(P.dim0() == 9);
  for (int p = 0; p <= 3; ++p)
    for (bool periodic : {false, true}) {
      if (periodic && p + 1 >= 4) continue;
      DeRhamPatch Q = unit_patch(p, 4, 5 - (periodic ? 0 : 1), periodic);
      SparseMatrix dc = multiply(Q.div, Q.curl);
      CHECK(dc.max_abs() == 0.0);
      for (const SparseMatrix* m : {&Q.m0, &Q.m1, &Q.m2}) {
        CHECK((oracle::dense(*m) - oracle::dense(*m).transpose()).cwiseAbs().maxCoeff() <= 1e-14);
        CHECK(oracle::dense(*m).llt().info() == Eigen::Success);
      }
      double total = 0.0;
      for (double v : Q.m2.values()) total += v;
      CHECK(std::abs(total - 1.0) < 1e-13);
    }
  CHECK_THROWS_AS(build_derham_patch(0, 0, PatchMap{0.0, 1.0, 0, 0}, P.fx, P.fy), Error);
}

TEST_CASE("push-forward of vectors by an affine map is bounded by its scales") {
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(-1, 1);
  PatchMap m{0.3, 0.7, 1.0, -2.0};
  double h = std::max(m.hx, m.hy), sigma = std::min(m.hx, m.hy) / h;
  for (int t = 0; t < 100; ++t) {
    double a = u(rng), b = u(rng);
    double n = std::hypot(a, b), pn = std::hypot(m.hx * a, m.hy * b);
    CHECK(pn <= h * n * (1 + 1e-15));
    CHECK(pn >= sigma * h * n * (1 - 1e-15));
  }
}

TEST_CASE("mass matrices equal quadrature of the squared field") {
  GridSpec g;
  g.degree = 2;
  g.cells_x = 3;
  g.cells_y = 4;
  g.patches_x = 2;
  g.x1 = 2.0;
  MultipatchSpace s(g);
  QuadratureGrid qg(s);
  std::mt19937 rng(8);
  for (Slot slot : {Slot::V0, Slot::V1, Slot::V2}) {
    auto c = oracle::random_vector(s.dim(slot), rng);
    double mat = dot(c, s.mass(slot).apply(c));
    double quad = 0.0;
    if (slot == Slot::V1) {
      Vec ux, uy;
      qg.eval_v1(c, ux, uy);
      for (int q = 0; q < qg.size(); ++q) quad += qg.w()[q] * (ux[q] * ux[q] + uy[q] * uy[q]);
    } else {
      Vec v;
      qg.eval_scalar(slot, c, v);
      for (int q = 0; q < qg.size(); ++q) quad += qg.w()[q] * v[q] * v[q];
    }
    CHECK(std::abs(mat - quad) < 1e-12 * mat);
  }
}

TEST_CASE("L2 projection and evaluation") {
  GridSpec g;
  g.degree = 2;
  g.cells_x = g.cells_y = 4;
  g.patches_x = 2;
  g.patches_y = 1;
  MultipatchSpace s(g);
  QuadratureGrid qg(s);
  Field zero = l2_project(qg, [](double, double) { return std::array<double, 2>{0.0, 0.0}; });
  CHECK(norm_inf(zero.coeffs) == 0.0);
  Field one = l2_project(qg, Slot::V2, [](double, double) { return 1.0; });
  Field e1 = l2_project(qg, [](double, double) { return std::array<double, 2>{1.0, 0.0}; });
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 50; ++t) {
    double x = u(rng), y = u(rng);
    CHECK(std::abs(eval_field(s, one, x, y)[0] - 1.0) < 1e-12);
    auto v = eval_field(s, e1, x, y);
    CHECK(std::abs(v[0] - 1.0) < 1e-12);
    CHECK(std::abs(v[1]) < 1e-12);
  }
  CHECK_THROWS_AS(eval_field(s, one, 1.5, 0.5), Error);
  CHECK_THROWS_AS(l2_project(qg, Slot::V2, [](double, double) { return std::nan(""); }), Error);

  // integral of a V1 basis function equals its M1 row sum
  std::vector<double> ej(s.dim(Slot::V1), 0.0);
  const int j = 7;
  ej[j] = 1.0;
  Vec ux, uy;
  qg.eval_v1(ej, ux, uy);
  double integral = 0.0;
  for (int q = 0; q < qg.size(); ++q) integral += qg.w()[q] * (ux[q] + uy[q]);
  double rowsum = 0.0;
  const SparseMatrix& m1 = s.mass(Slot::V1);
  for (int k = m1.row_ptr()[j]; k < m1.row_ptr()[j + 1]; ++k) rowsum += m1.values()[k];
  CHECK(std::abs(integral - rowsum) < 1e-14);
}

TEST_CASE("L2 projection of the Taylor-Green field converges at order p + 1") {
  using std::numbers::pi;
  auto tg = [](double x, double y) {
    return std::array<double, 2>{1 - 2 * std::cos(2 * x) * std::sin(2 * y), 1 + 2 * std::cos(2 * y) * std::sin(2 * x)};
  };
  for (int p : {1, 3}) {
    double prev = 0.0;
    for (int n : {8, 16}) {
      GridSpec g;
      g.degree = p;
      g.cells_x = g.cells_y = n;
      g.x1 = g.y1 = pi;
      g.periodic_x = g.periodic_y = true;
      MultipatchSpace s(g);
      QuadratureGrid qg(s);
      Field f = l2_project(qg, tg);
      Vec ux, uy;
      qg.eval_v1(f.coeffs, ux, uy);
      double e = 0.0;
      for (int q = 0; q < qg.size(); ++q) {
        auto ex = tg(qg.x()[q], qg.y()[q]);
        e += qg.w()[q] * ((ux[q] - ex[0]) * (ux[q] - ex[0]) + (uy[q] - ex[1]) * (uy[q] - ex[1]));
      }
      e = std::sqrt(e);
      if (prev > 0) CHECK(std::log2(prev / e) >= p + 1 - 0.1);
      prev = e;
    }
  }
}
