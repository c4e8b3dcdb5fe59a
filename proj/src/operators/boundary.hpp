#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "multipatch/multipatch_space.hpp"

namespace feecns {

enum class Edge { Left = 0, Right = 1, Bottom = 2, Top = 3 };
const char* edge_name(Edge e);

/// no_slip: u = 0. velocity: u = edge velocity. slip: u.n = edge velocity.n.
/// pressure: p = edge pressure. pressure_normal: p = edge pressure and u x n = edge velocity x n.
enum class BoundaryKind { NoSlip, Velocity, Slip, Pressure, PressureNormal };
const char* kind_name(BoundaryKind k);
BoundaryKind parse_kind(const std::string& s);

inline bool is_normal(BoundaryKind k) {
  return k == BoundaryKind::NoSlip || k == BoundaryKind::Velocity || k == BoundaryKind::Slip;
}
inline bool is_tangential(BoundaryKind k) {
  return k == BoundaryKind::NoSlip || k == BoundaryKind::Velocity || k == BoundaryKind::PressureNormal;
}

// [a, b] along the edge coordinate (x for bottom/top, y for left/right).
struct BoundarySegment {
  BoundaryKind kind = BoundaryKind::NoSlip;
  double a = 0.0, b = 0.0;

  bool operator==(const BoundarySegment&) const = default;
};

struct EdgeCondition {
  std::vector<BoundarySegment> segments;
  std::array<double, 2> velocity{0.0, 0.0};
  double pressure = 0.0;

  bool operator==(const EdgeCondition&) const = default;
};

struct BoundarySpec {
  std::array<EdgeCondition, 4> edges;
  EdgeCondition& operator[](Edge e) { return edges[static_cast<int>(e)]; }
  const EdgeCondition& operator[](Edge e) const { return edges[static_cast<int>(e)]; }
  bool operator==(const BoundarySpec&) const = default;
};

// Outward unit normal.
std::array<double, 2> edge_normal(Edge e);

/// One Gauss point on the outer boundary together with the basis functions that do not vanish there.
struct BoundaryPoint {
  Edge edge;
  int patch;
  BoundaryKind kind;
  double x, y, w;  // w includes the edge length element
};

/// Assembled boundary terms of the bounded formulation.
class BoundaryOperators {
 public:
  BoundaryOperators(const MultipatchSpace& space, const BoundarySpec& spec);

  const BoundarySpec& spec() const { return spec_; }
  bool has_pressure_boundary() const { return has_pressure_; }
  bool has_normal_boundary() const { return has_normal_; }

  // Diagonal 0/1 projector zeroing the flux DOFs on the normal-velocity boundary.
  const SparseMatrix& pn() const { return pn_; }
  const Vec& pn_diagonal() const { return pn_diag_; }
  void apply_pn(std::span<double> v) const;
  // (j, i) = boundary integral of phi2_i (Lambda1_j . n) over the whole boundary
  const SparseMatrix& grad_boundary() const { return grad_bnd_; }
  // j: integral over the pressure boundary of p_b ((Pn Lambda1_j) . n)
  const Vec& pressure_load() const { return pressure_load_; }
  // (i, j) = integral over the boundary minus the tangential part of (Lambda1_j x n) Lambda0_i
  const SparseMatrix& curl_boundary() const { return curl_bnd_; }
  // i: integral over the tangential boundary of u_t Lambda0_i
  const Vec& tangent_load() const { return tangent_load_; }

  // Overwrite the flux DOFs on the normal boundary with the L2 projection of the normal data.
  void impose_normal_data(std::span<double> u) const;

  const std::vector<BoundaryPoint>& points() const { return points_; }

 private:
  const MultipatchSpace* space_;
  BoundarySpec spec_;
  bool has_pressure_ = false, has_normal_ = false;
  SparseMatrix pn_, grad_bnd_, curl_bnd_;
  Vec pn_diag_, pressure_load_, tangent_load_;
  std::vector<BoundaryPoint> points_;

  struct EdgeCells {
    Edge edge;
    int patch;
    std::vector<BoundaryKind> kinds;  // per cell along the edge
  };
  std::vector<EdgeCells> edge_cells_;
};

// Checks coverage and cell alignment of the segments; throws ConfigError.
void validate_boundary(const MultipatchSpace& space, const BoundarySpec& spec);

}  // namespace feecns
