#include "cases/case_library.hpp"

#include <cmath>
#include <numbers>

#include "core/errors.hpp"

namespace feecns {

namespace {

using std::numbers::pi;

GridSpec square(int p, int np, int nc, double a, double b, bool periodic) {
  GridSpec g;
  g.degree = p;
  g.patches_x = g.patches_y = np;
  g.cells_x = g.cells_y = nc;
  g.x0 = g.y0 = a;
  g.x1 = g.y1 = b;
  g.periodic_x = g.periodic_y = periodic;
  return g;
}

EdgeCondition whole(const GridSpec& g, Edge e, BoundaryKind k, std::array<double, 2> velocity = {0.0, 0.0},
                    double pressure = 0.0) {
  const bool vertical = e == Edge::Left || e == Edge::Right;
  EdgeCondition c;
  c.segments = {{k, vertical ? g.y0 : g.x0, vertical ? g.y1 : g.x1}};
  c.velocity = velocity;
  c.pressure = pressure;
  return c;
}

// Moving vortex on the period-pi torus; the exp(-8 nu t) decay keeps it exact for nu > 0.
CaseDefinition taylor_green(double nu) {
  CaseDefinition c;
  c.name = "taylor_green";
  c.grid = square(2, 1, 8, 0.0, pi, true);
  c.nu = nu;
  c.alpha = 1000.0;
  c.dt = 1e-3;
  c.t_final = 0.1;
  c.exact = [nu](double x, double y, double t) {
    const double a = 2 * std::exp(-8 * nu * t);
    return std::array<double, 2>{1 - a * std::cos(2 * (x - t)) * std::sin(2 * (y - t)),
                                 1 + a * std::cos(2 * (y - t)) * std::sin(2 * (x - t))};
  };
  c.initial = [e = c.exact](double x, double y) { return e(x, y, 0.0); };
  return c;
}

CaseDefinition poiseuille(double nu) {
  require(nu > 0.0, ErrorCode::ConfigError, "poiseuille: nu must be positive");
  CaseDefinition c;
  c.name = "poiseuille";
  c.grid = square(2, 3, 4, 0.0, pi, false);
  c.nu = nu;
  c.alpha = 10.0;
  c.dt = 1e-3;
  c.t_final = 100.0;
  c.steady_tol = 1e-8;
  // u_y'' = pi / nu balances dp/dy = pi, hence p = -+pi^2/2 on the bottom and top
  BoundarySpec bc;
  bc[Edge::Left] = whole(c.grid, Edge::Left, BoundaryKind::NoSlip);
  bc[Edge::Right] = whole(c.grid, Edge::Right, BoundaryKind::NoSlip);
  bc[Edge::Bottom] = whole(c.grid, Edge::Bottom, BoundaryKind::PressureNormal, {0.0, 0.0}, -pi * pi / 2);
  bc[Edge::Top] = whole(c.grid, Edge::Top, BoundaryKind::PressureNormal, {0.0, 0.0}, pi * pi / 2);
  c.boundary = bc;
  c.initial = [](double, double) { return std::array<double, 2>{0.0, 0.0}; };
  c.exact = [nu](double x, double, double) { return std::array<double, 2>{0.0, pi / nu * x * (x - pi) / 2}; };
  return c;
}

CaseDefinition lid_driven_cavity(double nu) {
  CaseDefinition c;
  c.name = "lid_driven_cavity";
  c.grid = square(2, 10, 4, 0.0, 1.0, false);
  c.nu = nu;
  c.alpha = 100.0;
  c.dt = 1e-3;
  c.t_final = 30.0;
  c.steady_tol = 1e-8;
  BoundarySpec bc;
  for (Edge e : {Edge::Left, Edge::Right, Edge::Bottom}) bc[e] = whole(c.grid, e, BoundaryKind::NoSlip);
  bc[Edge::Top] = whole(c.grid, Edge::Top, BoundaryKind::Velocity, {1.0, 0.0});
  c.boundary = bc;
  c.initial = [](double, double) { return std::array<double, 2>{0.0, 0.0}; };
  return c;
}

CaseDefinition blasius(double nu) {
  CaseDefinition c;
  c.name = "blasius";
  c.grid.degree = 2;
  c.grid.patches_x = 20;
  c.grid.patches_y = 5;
  c.grid.cells_x = c.grid.cells_y = 4;
  c.grid.x0 = -1.0;
  c.grid.x1 = 1.0;
  c.grid.y0 = 0.0;
  c.grid.y1 = 0.5;
  c.nu = nu;
  c.alpha = 100.0;
  c.dt = 1e-3;
  c.t_final = 10.0;
  c.steady_tol = 1e-8;
  BoundarySpec bc;
  bc[Edge::Left] = whole(c.grid, Edge::Left, BoundaryKind::Velocity, {1.0, 0.0});
  bc[Edge::Bottom].segments = {{BoundaryKind::Slip, -1.0, 0.0}, {BoundaryKind::NoSlip, 0.0, 1.0}};
  bc[Edge::Right] = whole(c.grid, Edge::Right, BoundaryKind::Pressure);
  bc[Edge::Top] = whole(c.grid, Edge::Top, BoundaryKind::Pressure);
  c.boundary = bc;
  c.initial = [](double, double) { return std::array<double, 2>{1.0, 0.0}; };
  return c;
}

CaseDefinition double_shear_layer(double nu) {
  CaseDefinition c;
  c.name = "double_shear_layer";
  c.grid = square(2, 1, 100, -1.0, 1.0, true);
  c.nu = nu;
  c.alpha = 1000.0;
  c.dt = 2e-3;
  c.t_final = 4.0;
  const double delta = 1.0 / 15.0, eps = 0.05;
  c.initial = [=](double x, double y) {
    return std::array<double, 2>{std::tanh((y + 0.5) / delta) - std::tanh((y - 0.5) / delta) - 1.0,
                                 eps * std::sin(2 * pi * x)};
  };
  return c;
}

// Fluid at rest in a closed box: the exact solution is zero for all time.
CaseDefinition quiescent(double nu) {
  CaseDefinition c;
  c.name = "quiescent";
  c.grid = square(2, 1, 4, 0.0, 1.0, false);
  c.nu = nu;
  c.alpha = 100.0;
  c.dt = 1e-2;
  c.t_final = 0.1;
  BoundarySpec bc;
  for (Edge e : {Edge::Left, Edge::Right, Edge::Bottom, Edge::Top}) bc[e] = whole(c.grid, e, BoundaryKind::NoSlip);
  c.boundary = bc;
  c.initial = [](double, double) { return std::array<double, 2>{0.0, 0.0}; };
  c.exact = [](double, double, double) { return std::array<double, 2>{0.0, 0.0}; };
  return c;
}

}  // namespace

std::vector<std::string> case_names() {
  return {"taylor_green", "poiseuille", "lid_driven_cavity", "blasius", "double_shear_layer", "quiescent"};
}

CaseDefinition case_library(const std::string& name, std::optional<double> nu) {
  if (name == "taylor_green") return taylor_green(nu.value_or(0.0));
  if (name == "poiseuille") return poiseuille(nu.value_or(1.0));
  if (name == "lid_driven_cavity") return lid_driven_cavity(nu.value_or(1e-2));
  if (name == "blasius") return blasius(nu.value_or(1e-3));
  if (name == "double_shear_layer") return double_shear_layer(nu.value_or(2e-4));
  if (name == "quiescent") return quiescent(nu.value_or(1e-2));
  fail(ErrorCode::ConfigError, "unknown case '" + name + "'");
}

}  // namespace feecns
