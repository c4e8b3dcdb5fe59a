#include "cases/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "cases/case_library.hpp"
#include "core/errors.hpp"

namespace feecns {

namespace {

using boost::property_tree::ptree;

// Section names contain dots, so paths use '/' as separator.
ptree::path_type path(const std::string& s) { return ptree::path_type(s, '/'); }

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double to_double(const std::string& raw, const std::string& key) {
  const std::string s = trim(raw);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || !std::isfinite(v))
    fail(ErrorCode::ConfigError, "config: " + key + " = '" + raw + "' is not a finite number");
  return v;
}

int to_int(const std::string& raw, const std::string& key) {
  const std::string s = trim(raw);
  int v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size())
    fail(ErrorCode::ConfigError, "config: " + key + " = '" + raw + "' is not an integer");
  return v;
}

bool to_bool(const std::string& raw, const std::string& key) {
  const std::string s = trim(raw);
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  fail(ErrorCode::ConfigError, "config: " + key + " = '" + raw + "' is not a boolean");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

bool vertical(Edge e) { return e == Edge::Left || e == Edge::Right; }
std::pair<double, double> edge_range(const GridSpec& g, Edge e) {
  return vertical(e) ? std::pair{g.y0, g.y1} : std::pair{g.x0, g.x1};
}
bool edge_exists(const GridSpec& g, Edge e) { return vertical(e) ? !g.periodic_x : !g.periodic_y; }

constexpr Edge kEdges[] = {Edge::Left, Edge::Right, Edge::Bottom, Edge::Top};

// "no_slip" covers the whole edge; "slip:-1:0; no_slip:0:1" lists segments.
std::vector<BoundarySegment> parse_segments(const std::string& s, double lo, double hi, const std::string& key) {
  std::vector<BoundarySegment> out;
  for (const std::string& item : split(s, ';')) {
    if (item.empty()) continue;
    const auto parts = split(item, ':');
    if (parts.size() == 1) {
      out.push_back({parse_kind(parts[0]), lo, hi});
    } else if (parts.size() == 3) {
      out.push_back({parse_kind(parts[0]), to_double(parts[1], key), to_double(parts[2], key)});
    } else {
      fail(ErrorCode::ConfigError, "config: " + key + ": malformed segment '" + item + "'");
    }
  }
  if (out.empty()) fail(ErrorCode::ConfigError, "config: " + key + " is empty");
  return out;
}

std::string format_segments(const std::vector<BoundarySegment>& segs, double lo, double hi) {
  if (segs.size() == 1 && segs[0].a == lo && segs[0].b == hi) return kind_name(segs[0].kind);
  std::string out;
  for (const auto& s : segs) {
    if (!out.empty()) out += "; ";
    out += std::string(kind_name(s.kind)) + ":" + fmt(s.a) + ":" + fmt(s.b);
  }
  return out;
}

ptree to_ptree(const SimulationConfig& c) {
  ptree pt;
  pt.put(path("case/name"), c.case_name);
  const GridSpec& g = c.grid;
  pt.put(path("grid/degree"), std::to_string(g.degree));
  pt.put(path("grid/patches_x"), std::to_string(g.patches_x));
  pt.put(path("grid/patches_y"), std::to_string(g.patches_y));
  pt.put(path("grid/cells_x"), std::to_string(g.cells_x));
  pt.put(path("grid/cells_y"), std::to_string(g.cells_y));
  pt.put(path("grid/x0"), fmt(g.x0));
  pt.put(path("grid/x1"), fmt(g.x1));
  pt.put(path("grid/y0"), fmt(g.y0));
  pt.put(path("grid/y1"), fmt(g.y1));
  pt.put(path("grid/periodic_x"), g.periodic_x ? "true" : "false");
  pt.put(path("grid/periodic_y"), g.periodic_y ? "true" : "false");
  if (g.moment_order) pt.put(path("grid/moment_order"), std::to_string(*g.moment_order));
  if (g.stencil_radius) pt.put(path("grid/stencil_radius"), std::to_string(*g.stencil_radius));
  pt.put(path("physics/nu"), fmt(c.nu));
  pt.put(path("physics/alpha"), fmt(c.alpha));
  pt.put(path("stepper/dt"), fmt(c.dt));
  pt.put(path("stepper/dt_auto"), c.dt_auto ? "true" : "false");
  pt.put(path("stepper/t_final"), fmt(c.t_final));
  pt.put(path("stepper/picard_tol"), fmt(c.picard_tol));
  pt.put(path("stepper/picard_max_iter"), std::to_string(c.picard_max_iter));
  pt.put(path("stepper/cg_tol"), fmt(c.cg_tol));
  pt.put(path("stepper/steady_tol"), fmt(c.steady_tol));
  pt.put(path("stepper/cfl_safety"), fmt(c.cfl_safety));
  pt.put(path("stepper/cfl_constant"), fmt(c.cfl_constant));
  pt.put(path("output/dir"), c.output.dir);
  pt.put(path("output/diagnostics"), c.output.diagnostics);
  pt.put(path("output/snapshot_every"), std::to_string(c.output.snapshot_every));
  pt.put(path("output/sample_nx"), std::to_string(c.output.sample_nx));
  pt.put(path("output/sample_ny"), std::to_string(c.output.sample_ny));
  if (c.boundary) {
    for (Edge e : kEdges) {
      const EdgeCondition& ec = (*c.boundary)[e];
      if (ec.segments.empty()) continue;
      const std::string sec = std::string("boundary.") + edge_name(e) + "/";
      const auto [lo, hi] = edge_range(g, e);
      pt.put(path(sec + "kind"), format_segments(ec.segments, lo, hi));
      pt.put(path(sec + "velocity"), fmt(ec.velocity[0]) + ", " + fmt(ec.velocity[1]));
      pt.put(path(sec + "pressure"), fmt(ec.pressure));
    }
  }
  return pt;
}

SimulationConfig from_ptree(const ptree& pt) {
  const auto name = pt.get_optional<std::string>(path("case/name"));
  if (!name) fail(ErrorCode::ConfigError, "config: missing [case] name");
  SimulationConfig c = default_config(trim(*name));
  const GridSpec default_grid = c.grid;

  static const std::set<std::string> sections = {"case", "grid", "physics", "stepper", "output"};
  for (const auto& [sec, body] : pt) {
    if (!body.data().empty()) fail(ErrorCode::ConfigError, "config: key '" + sec + "' outside any section");
    const bool is_edge = sec.rfind("boundary.", 0) == 0;
    if (!sections.count(sec) && !is_edge) fail(ErrorCode::ConfigError, "config: unknown section [" + sec + "]");
    if (is_edge) continue;
    for (const auto& [key, node] : body) {
      const std::string v = node.data(), k = sec + "." + key;
      GridSpec& g = c.grid;
      if (sec == "case" && key == "name") continue;
      else if (k == "grid.degree") g.degree = to_int(v, k);
      else if (k == "grid.patches_x") g.patches_x = to_int(v, k);
      else if (k == "grid.patches_y") g.patches_y = to_int(v, k);
      else if (k == "grid.cells_x") g.cells_x = to_int(v, k);
      else if (k == "grid.cells_y") g.cells_y = to_int(v, k);
      else if (k == "grid.x0") g.x0 = to_double(v, k);
      else if (k == "grid.x1") g.x1 = to_double(v, k);
      else if (k == "grid.y0") g.y0 = to_double(v, k);
      else if (k == "grid.y1") g.y1 = to_double(v, k);
      else if (k == "grid.periodic_x") g.periodic_x = to_bool(v, k);
      else if (k == "grid.periodic_y") g.periodic_y = to_bool(v, k);
      else if (k == "grid.moment_order") g.moment_order = to_int(v, k);
      else if (k == "grid.stencil_radius") g.stencil_radius = to_int(v, k);
      else if (k == "physics.nu") c.nu = to_double(v, k);
      else if (k == "physics.alpha") c.alpha = to_double(v, k);
      else if (k == "stepper.dt") c.dt = to_double(v, k);
      else if (k == "stepper.dt_auto") c.dt_auto = to_bool(v, k);
      else if (k == "stepper.t_final") c.t_final = to_double(v, k);
      else if (k == "stepper.picard_tol") c.picard_tol = to_double(v, k);
      else if (k == "stepper.picard_max_iter") c.picard_max_iter = to_int(v, k);
      else if (k == "stepper.cg_tol") c.cg_tol = to_double(v, k);
      else if (k == "stepper.steady_tol") c.steady_tol = to_double(v, k);
      else if (k == "stepper.cfl_safety") c.cfl_safety = to_double(v, k);
      else if (k == "stepper.cfl_constant") c.cfl_constant = to_double(v, k);
      else if (k == "output.dir") c.output.dir = trim(v);
      else if (k == "output.diagnostics") c.output.diagnostics = trim(v);
      else if (k == "output.snapshot_every") c.output.snapshot_every = to_int(v, k);
      else if (k == "output.sample_nx") c.output.sample_nx = to_int(v, k);
      else if (k == "output.sample_ny") c.output.sample_ny = to_int(v, k);
      else fail(ErrorCode::ConfigError, "config: unknown key '" + k + "'");
    }
  }

  const GridSpec& g = c.grid;
  if (g.periodic_x && g.periodic_y) {
    c.boundary.reset();
  } else if (!c.boundary) {
    c.boundary = BoundarySpec{};
  }
  if (c.boundary) {
    for (Edge e : kEdges) {
      EdgeCondition& ec = (*c.boundary)[e];
      if (!edge_exists(g, e)) {
        ec = EdgeCondition{};
        continue;
      }
      // whole-edge defaults follow a changed domain
      const auto [dlo, dhi] = edge_range(default_grid, e);
      const auto [lo, hi] = edge_range(g, e);
      if (ec.segments.size() == 1 && ec.segments[0].a == dlo && ec.segments[0].b == dhi)
        ec.segments[0] = {ec.segments[0].kind, lo, hi};
    }
  }
  for (const auto& [sec, body] : pt) {
    if (sec.rfind("boundary.", 0) != 0) continue;
    const std::string en = sec.substr(9);
    Edge edge = Edge::Left;
    bool found = false;
    for (Edge e : kEdges)
      if (en == edge_name(e)) edge = e, found = true;
    if (!found) fail(ErrorCode::ConfigError, "config: unknown edge in [" + sec + "]");
    if (!c.boundary || !edge_exists(g, edge))
      fail(ErrorCode::ConfigError, "config: [" + sec + "] given for an edge in a periodic direction");
    EdgeCondition& ec = (*c.boundary)[edge];
    const auto [lo, hi] = edge_range(g, edge);
    for (const auto& [key, node] : body) {
      const std::string v = node.data(), k = sec + "." + key;
      if (key == "kind") {
        ec.segments = parse_segments(v, lo, hi, k);
      } else if (key == "velocity") {
        const auto parts = split(v, ',');
        if (parts.size() != 2) fail(ErrorCode::ConfigError, "config: " + k + " needs two components");
        ec.velocity = {to_double(parts[0], k), to_double(parts[1], k)};
      } else if (key == "pressure") {
        ec.pressure = to_double(v, k);
      } else {
        fail(ErrorCode::ConfigError, "config: unknown key '" + k + "'");
      }
    }
  }
  return c;
}

}  // namespace

SimulationConfig default_config(const std::string& case_name) {
  const CaseDefinition d = case_library(case_name);
  SimulationConfig c;
  c.case_name = d.name;
  c.grid = d.grid;
  c.nu = d.nu;
  c.alpha = d.alpha;
  c.dt = d.dt;
  c.t_final = d.t_final;
  c.steady_tol = d.steady_tol;
  c.boundary = d.boundary;
  return c;
}

SimulationConfig parse_config(const std::string& text) {
  ptree pt;
  std::istringstream in(text);
  try {
    boost::property_tree::read_ini(in, pt);
  } catch (const boost::property_tree::ini_parser_error& e) {
    fail(ErrorCode::ConfigError, std::string("config: ") + e.what());
  }
  return from_ptree(pt);
}

SimulationConfig load_config(const std::string& file) {
  std::ifstream in(file);
  if (!in) fail(ErrorCode::IoError, "cannot read config file " + file);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const SimulationConfig& cfg) {
  std::ostringstream out;
  boost::property_tree::write_ini(out, to_ptree(cfg));
  return out.str();
}

void save_config(const SimulationConfig& cfg, const std::string& file) {
  std::ofstream out(file);
  if (!out) fail(ErrorCode::IoError, "cannot write config file " + file);
  out << serialize_config(cfg);
  if (!out) fail(ErrorCode::IoError, "write failed: " + file);
}

namespace {

ptree::path_type key_path(const std::string& key) {
  const auto dot = key.rfind('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == key.size())
    fail(ErrorCode::ConfigError, "config: key '" + key + "' must look like section.name");
  return path(key.substr(0, dot) + "/" + key.substr(dot + 1));
}

}  // namespace

void set_config_value(SimulationConfig& cfg, const std::string& key, const std::string& value) {
  ptree pt = to_ptree(cfg);
  pt.put(key_path(key), value);
  cfg = from_ptree(pt);
}

std::string get_config_value(const SimulationConfig& cfg, const std::string& key) {
  const auto v = to_ptree(cfg).get_optional<std::string>(key_path(key));
  if (!v) fail(ErrorCode::ConfigError, "config: no value for '" + key + "'");
  return *v;
}

void apply_environment(SimulationConfig& cfg) {
  if (const char* dir = std::getenv("FEECNS_OUTPUT_DIR"); dir && *dir) cfg.output.dir = dir;
}

void validate(const SimulationConfig& c) {
  const CaseDefinition def = case_library(c.case_name, c.nu);
  const auto bad = [](const std::string& m) { fail(ErrorCode::ConfigError, "config: " + m); };
  if (c.grid.periodic_x != def.grid.periodic_x || c.grid.periodic_y != def.grid.periodic_y)
    bad("case " + c.case_name + " requires periodic_x = " + (def.grid.periodic_x ? "true" : "false") +
        " and periodic_y = " + (def.grid.periodic_y ? "true" : "false"));
  if (!(c.nu >= 0.0)) bad("nu must be non-negative");
  if (!(c.alpha >= 0.0)) bad("alpha must be non-negative");
  if (!(c.dt > 0.0)) bad("dt must be positive");
  if (!(c.t_final > 0.0)) bad("t_final must be positive");
  if (!(c.steady_tol >= 0.0)) bad("steady_tol must be non-negative");
  if (c.output.snapshot_every < 0) bad("snapshot_every must be non-negative");
  if (c.output.sample_nx < 2 || c.output.sample_ny < 2) bad("sampling grid needs at least 2 points per direction");
  if (c.output.dir.empty()) bad("output dir is empty");
  if (c.output.diagnostics.empty()) bad("diagnostics file name is empty");
  const bool periodic = c.grid.periodic_x && c.grid.periodic_y;
  if (periodic == c.boundary.has_value()) bad("boundary conditions are needed exactly when a direction is bounded");
  validate(stepper_config(c));
}

StepperConfig stepper_config(const SimulationConfig& c) {
  StepperConfig s;
  s.dt = c.dt;
  s.dt_max = c.dt;
  s.picard_tol = c.picard_tol;
  s.picard_max_iter = c.picard_max_iter;
  s.cg_tol = c.cg_tol;
  s.nu = c.nu;
  s.alpha = c.alpha;
  s.cfl_safety = c.cfl_safety;
  s.cfl_constant = c.cfl_constant;
  return s;
}

}  // namespace feecns
