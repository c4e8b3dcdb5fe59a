#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cases/case_library.hpp"
#include "cases/config.hpp"
#include "diagnostics/diagnostics.hpp"
#include "stepper/time_integrator.hpp"

namespace feecns {

/// State of one run: the discrete velocity and pressure advanced step by step.
/// The initial velocity is the L2 projection of the case data followed by a Leray correction.
class Simulation {
 public:
  explicit Simulation(const SimulationConfig& cfg, const VectorFunction& forcing = {});

  const SimulationConfig& config() const { return cfg_; }
  const CaseDefinition& case_definition() const { return case_; }
  const OperatorContext& context() const { return *ctx_; }
  const Stepper& stepper() const { return *stepper_; }
  const Vec& velocity() const { return u_; }
  const Vec& pressure() const { return p_; }
  double time() const { return t_; }
  int steps() const { return steps_; }
  int dt_halvings() const { return halvings_; }
  bool steady() const { return steady_; }
  // t_final reached or steady state detected
  bool finished() const;

  // Advances by min(dt, t_final - t), with dt from the CFL estimate in dt_auto mode.
  // A failed step is retried once with half the step, and the halved dt is kept for the rest of
  // the run. Throws StepFailure when the retry fails too; the state is then left unchanged.
  StepReport step();

  DiagnosticsRecord diagnostics() const;
  // L2 distance to the exact solution at the current time, when the case has one.
  std::optional<double> velocity_error() const;

  // Samples u, p and the vorticity on the configured uniform grid.
  void write_snapshot(const std::string& path) const;

 private:
  SimulationConfig cfg_;
  CaseDefinition case_;
  std::unique_ptr<OperatorContext> ctx_;
  std::unique_ptr<Stepper> stepper_;
  Vec u_, p_;
  double t_ = 0.0, dt_ = 0.0;
  int steps_ = 0, halvings_ = 0, last_iterations_ = 0;
  bool steady_ = false;
};

struct RunSummary {
  bool ok = true;
  std::string message;
  int steps = 0;
  double time = 0.0;
  double wall_seconds = 0.0;
  bool steady = false;
  int dt_halvings = 0;
  std::optional<double> velocity_error;
  DiagnosticsRecord final_record;
};

/// Runs to t_final or steady state. Writes the diagnostics CSV (one row per accepted step plus
/// the initial state) and the snapshots into the output directory. A step failure ends the run
/// with ok = false after flushing a snapshot of the last accepted state.
RunSummary run(const SimulationConfig& cfg);

std::string summary_line(const SimulationConfig& cfg, const RunSummary& s);

struct ConvergenceRow {
  int degree = 0;
  int n_cells = 0;  // cells per direction over the whole domain
  double h = 0.0;
  double error = 0.0;  // NaN for failed runs
  double order = 0.0;  // least-squares order over the successful runs of this degree; NaN below 2
  std::string status;  // "ok" or the failure message
};

/// One run per (degree, mesh), without file output; mesh counts total cells per direction and
/// must be divisible by the patch counts. Runs execute on `threads` workers (0: FEECNS_NUM_THREADS,
/// else the hardware concurrency). Failed runs are reported as rows, not exceptions.
std::vector<ConvergenceRow> convergence_study(const SimulationConfig& cfg, const std::vector<int>& meshes,
                                              const std::vector<int>& degrees, int threads = 0);

void write_convergence_csv(const std::vector<ConvergenceRow>& rows, const std::string& path);

// Worker count from FEECNS_NUM_THREADS, falling back to the hardware concurrency.
int default_thread_count();

}  // namespace feecns
