#pragma once

#include <optional>
#include <string>

#include "operators/boundary.hpp"
#include "stepper/time_integrator.hpp"

namespace feecns {

struct OutputConfig {
  std::string dir = "output";
  std::string diagnostics = "diagnostics.csv";
  int snapshot_every = 0;  // steps between snapshots; 0 writes none
  int sample_nx = 65, sample_ny = 65;

  bool operator==(const OutputConfig&) const = default;
};

/// Full description of one run.
struct SimulationConfig {
  std::string case_name;
  GridSpec grid;
  double nu = 0.0;
  double alpha = 0.0;
  bool dt_auto = false;  // dt from the CFL estimate at every step, capped by dt
  double dt = 1e-3;
  double t_final = 0.1;
  double picard_tol = 1e-8;
  int picard_max_iter = 50;
  double cg_tol = 1e-10;
  double steady_tol = 0.0;  // stop once ||u^{n+1} - u^n||_M1 / dt <= steady_tol; 0 disables
  double cfl_safety = 0.5;
  double cfl_constant = 1.0;
  std::optional<BoundarySpec> boundary;  // absent for fully periodic grids
  OutputConfig output;

  bool operator==(const SimulationConfig&) const = default;
};

// Recommended configuration of a library case.
SimulationConfig default_config(const std::string& case_name);

/// INI text: a [case] section with `name`, then [grid], [physics], [stepper], [output] and
/// [boundary.<edge>] sections. Keys absent from the text keep the case defaults.
SimulationConfig parse_config(const std::string& text);
SimulationConfig load_config(const std::string& path);
std::string serialize_config(const SimulationConfig& cfg);
void save_config(const SimulationConfig& cfg, const std::string& path);

// Dotted keys such as "stepper.dt" or "boundary.left.kind".
void set_config_value(SimulationConfig& cfg, const std::string& key, const std::string& value);
std::string get_config_value(const SimulationConfig& cfg, const std::string& key);

// FEECNS_OUTPUT_DIR, when set, replaces the output directory.
void apply_environment(SimulationConfig& cfg);

// Throws ConfigError when the configuration is inconsistent with its case or with itself.
void validate(const SimulationConfig& cfg);

StepperConfig stepper_config(const SimulationConfig& cfg);

}  // namespace feecns
