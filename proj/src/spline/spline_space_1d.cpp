#include "spline/spline_space_1d.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/errors.hpp"

namespace feecns {

SplineSpace1D::SplineSpace1D(int degree, int n_cells, double a, double b, bool periodic)
    : degree_(degree), n_cells_(n_cells), a_(a), b_(b), periodic_(periodic) {
  require(degree >= 0, ErrorCode::InvalidArgument, "spline space: degree must be >= 0");
  require(n_cells >= 1, ErrorCode::InvalidArgument, "spline space: n_cells must be >= 1");
  require(b > a, ErrorCode::InvalidArgument, "spline space: empty interval");
  if (periodic)
    require(n_cells > degree, ErrorCode::InvalidArgument,
            "spline space: periodic space needs n_cells > degree (got n_cells=" + std::to_string(n_cells) +
                ", degree=" + std::to_string(degree) + ")");
  h_ = (b - a) / n_cells;
  if (periodic) {
    dim_ = n_cells;
    knots_.resize(n_cells + 2 * degree + 1);
    for (int j = 0; j < static_cast<int>(knots_.size()); ++j) knots_[j] = a + (j - degree) * h_;
  } else {
    dim_ = n_cells + degree;
    knots_.reserve(n_cells + 2 * degree + 1);
    for (int j = 0; j < degree; ++j) knots_.push_back(a);
    for (int c = 0; c <= n_cells; ++c) knots_.push_back(c == n_cells ? b : a + c * h_);
    for (int j = 0; j < degree; ++j) knots_.push_back(b);
  }
}

int SplineSpace1D::cell_of(double x) const {
  int c = static_cast<int>(std::floor((x - a_) / h_));
  return std::clamp(c, 0, n_cells_ - 1);
}

void SplineSpace1D::values_deg(int cell, double x, int deg, double* out) const {
  // Cox-de Boor on the span of `cell`, evaluated for degree `deg` <= degree_.
  const int span = cell + degree_;
  double left[32], right[32];
  out[0] = 1.0;
  for (int j = 1; j <= deg; ++j) {
    left[j] = x - knots_[span + 1 - j];
    right[j] = knots_[span + j] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      double temp = out[r] / (right[r + 1] + left[j - r]);
      out[r] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    out[j] = saved;
  }
}

void SplineSpace1D::values(int cell, double x, double* out) const { values_deg(cell, x, degree_, out); }

void SplineSpace1D::derivatives(int cell, double x, double* out) const {
  const int p = degree_;
  if (p == 0) {
    out[0] = 0.0;
    return;
  }
  double low[32];
  values_deg(cell, x, p - 1, low);
  const int span = cell + p;
  for (int r = 0; r <= p; ++r) {
    int i = span - p + r;
    double d = 0.0;
    if (r >= 1) d += p / (knots_[i + p] - knots_[i]) * low[r - 1];
    if (r <= p - 1) d -= p / (knots_[i + p + 1] - knots_[i + 1]) * low[r];
    out[r] = d;
  }
}

double SplineSpace1D::evaluate(std::span<const double> coeffs, double x) const {
  int c = cell_of(x);
  double v[32];
  values(c, x, v);
  double s = 0.0;
  for (int r = 0; r <= degree_; ++r) s += coeffs[index(c, r)] * v[r];
  return s;
}

BasisTable make_basis_table(const SplineSpace1D& s, int points_per_cell) {
  QuadratureRule rule = gauss_legendre(points_per_cell);
  BasisTable t;
  t.n_cells = s.n_cells();
  t.points_per_cell = points_per_cell;
  t.width = s.degree() + 1;
  const int nq = t.n_points();
  t.x.resize(nq);
  t.w.resize(nq);
  t.values.resize(static_cast<size_t>(nq) * t.width);
  for (int c = 0; c < s.n_cells(); ++c) {
    double x0 = s.a() + c * s.h();
    for (int k = 0; k < points_per_cell; ++k) {
      int q = c * points_per_cell + k;
      t.x[q] = x0 + 0.5 * s.h() * (rule.points[k] + 1.0);
      t.w[q] = 0.5 * s.h() * rule.weights[k];
      s.values(c, t.x[q], &t.values[static_cast<size_t>(q) * t.width]);
    }
  }
  return t;
}

SparseMatrix derivative_incidence_1d(const SplineSpace1D& high, const SplineSpace1D& low) {
  require(high.degree() == low.degree() + 1 && high.n_cells() == low.n_cells() &&
              high.periodic() == low.periodic() && high.a() == low.a() && high.b() == low.b(),
          ErrorCode::IncompatibleOperands, "derivative_incidence_1d: spaces are not a derivative pair");
  const int q = high.degree();
  const auto& t = high.knots();
  TripletBuilder b(low.dim(), high.dim());
  for (int m = 0; m < low.dim(); ++m) {
    int ip = high.periodic() ? (m + 1) % high.dim() : m + 1;
    double scale = q / (t[m + 1 + q] - t[m + 1]);
    b.add(m, ip, scale);
    b.add(m, m, -scale);
  }
  return b.build();
}

SparseMatrix mixed_mass_1d(const SplineSpace1D& a, const SplineSpace1D& b, int points_per_cell) {
  require(a.n_cells() == b.n_cells() && a.periodic() == b.periodic(), ErrorCode::IncompatibleOperands,
          "mixed_mass_1d: spaces do not share a mesh");
  BasisTable ta = make_basis_table(a, points_per_cell);
  BasisTable tb = make_basis_table(b, points_per_cell);
  TripletBuilder m(a.dim(), b.dim());
  for (int q = 0; q < ta.n_points(); ++q) {
    int c = ta.first(q);
    for (int i = 0; i < ta.width; ++i)
      for (int j = 0; j < tb.width; ++j)
        m.add(a.index(c, i), b.index(c, j), ta.w[q] * ta.values[q * ta.width + i] * tb.values[q * tb.width + j]);
  }
  return m.build();
}

}  // namespace feecns
