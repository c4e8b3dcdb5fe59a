#pragma once

// Dense reference model of the discrete operators. Basis values come from pointwise evaluation
// of unit coefficient vectors at the quadrature points; every operator is then an explicit
// Eigen matrix built from the defining relations.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <functional>
#include <span>

#include "multipatch/fields.hpp"
#include "oracles.hpp"
#include "operators/operator_context.hpp"

namespace oracle {

struct DenseModel {
  int nq = 0;
  Eigen::VectorXd w;
  Eigen::MatrixXd e0, e1x, e1y, e2;  // basis values at the quadrature points
  Eigen::MatrixXd m0, m1, m2, pc0, pc1, div, curl;
  Eigen::MatrixXd grad;  // weak gradient, boundaryless
  Eigen::MatrixXd wcurl;  // weak curl, boundaryless
  std::array<Eigen::MatrixXd, 2> ip;  // interior products

  explicit DenseModel(const feecns::OperatorContext& ctx) {
    using namespace feecns;
    const MultipatchSpace& s = ctx.space();
    const QuadratureGrid& qg = ctx.quad();
    nq = qg.size();
    w = to_eigen(qg.w());
    e0 = basis_values(s, qg, Slot::V0, 0);
    e2 = basis_values(s, qg, Slot::V2, 0);
    e1x = basis_values(s, qg, Slot::V1, 0);
    e1y = basis_values(s, qg, Slot::V1, 1);
    const auto W = w.asDiagonal();
    m0 = e0.transpose() * W * e0;
    m2 = e2.transpose() * W * e2;
    m1 = e1x.transpose() * W * e1x + e1y.transpose() * W * e1y;
    pc0 = dense(s.pc(Slot::V0));
    pc1 = dense(s.pc(Slot::V1));
    div = dense(s.div());
    curl = dense(s.curl());
    grad = -m1.ldlt().solve((div * pc1).transpose() * m2);
    wcurl = m0.ldlt().solve((curl * pc0).transpose() * m1);
    ip[0] = m2.ldlt().solve(e2.transpose() * W * e1x);
    ip[1] = m2.ldlt().solve(e2.transpose() * W * e1y);
  }

  // c_h(u, v, w) with an optional replacement of the trial-slot gradient.
  double advection(const Eigen::VectorXd& u, const Eigen::VectorXd& v, const Eigen::VectorXd& wv,
                   const Eigen::MatrixXd* grad_trial = nullptr) const {
    const Eigen::MatrixXd& gt = grad_trial ? *grad_trial : grad;
    const Eigen::VectorXd ux = e1x * u, uy = e1y * u;
    double total = 0.0;
    for (int k = 0; k < 2; ++k) {
      const Eigen::VectorXd iv = ip[k] * v, iw = ip[k] * wv;
      const Eigen::VectorXd gv = gt * iv, gw = grad * iw;
      const Eigen::VectorXd ivq = e2 * iv, iwq = e2 * iw;
      const Eigen::VectorXd gvx = e1x * gv, gvy = e1y * gv, gwx = e1x * gw, gwy = e1y * gw;
      for (int q = 0; q < nq; ++q)
        total += w[q] * (iwq[q] * (ux[q] * gvx[q] + uy[q] * gvy[q]) - ivq[q] * (ux[q] * gwx[q] + uy[q] * gwy[q]));
    }
    return 0.5 * total;
  }

  static Eigen::MatrixXd basis_values(const feecns::MultipatchSpace& s, const feecns::QuadratureGrid& qg,
                                      feecns::Slot slot, int component) {
    using namespace feecns;
    const int n = s.dim(slot), nq = qg.size(), ppp = qg.points_per_patch();
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(nq, n);
    Field f{slot, Conformity::Broken, Vec(n, 0.0)};
    for (int j = 0; j < n; ++j) {
      f.coeffs[j] = 1.0;
      for (int q = 0; q < nq; ++q) e(q, j) = eval_field_in_patch(s, f, q / ppp, qg.x()[q], qg.y()[q])[component];
      f.coeffs[j] = 0.0;
    }
    return e;
  }
};

}  // namespace oracle
