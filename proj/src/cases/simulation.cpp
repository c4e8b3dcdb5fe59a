#include "cases/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <thread>

#include "core/errors.hpp"

namespace feecns {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct File {
  std::FILE* f = nullptr;
  explicit File(const std::string& path) : f(std::fopen(path.c_str(), "w")) {
    if (!f) fail(ErrorCode::IoError, "cannot open " + path + " for writing");
  }
  ~File() {
    if (f) std::fclose(f);
  }
  File(const File&) = delete;
  File& operator=(const File&) = delete;
};

void write_row(std::FILE* f, const DiagnosticsRecord& r) {
  std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", r.time, r.energy, r.momentum[0], r.momentum[1],
               r.div_l2, r.jump_energy, r.enstrophy_term, r.picard_iterations);
}

}  // namespace

Simulation::Simulation(const SimulationConfig& cfg, const VectorFunction& forcing)
    : cfg_(cfg), case_(case_library(cfg.case_name, cfg.nu)) {
  validate(cfg_);
  ctx_ = std::make_unique<OperatorContext>(cfg_.grid, cfg_.boundary);
  stepper_ = std::make_unique<Stepper>(*ctx_, stepper_config(cfg_), forcing);
  u_ = l2_project(ctx_->quad(), case_.initial).coeffs;
  stepper_->leray_correction(u_);
  p_.assign(ctx_->space().dim(Slot::V2), 0.0);
  dt_ = cfg_.dt;
}

bool Simulation::finished() const { return steady_ || t_ >= cfg_.t_final - 1e-9 * dt_; }

StepReport Simulation::step() {
  for (int attempt = 0;; ++attempt) {
    double h = cfg_.dt_auto ? std::min(dt_, stepper_->cfl_dt(u_)) : dt_;
    h = std::min(h, cfg_.t_final - t_);
    require(h > 0.0, ErrorCode::InvalidArgument, "step: the run is already at t_final");
    stepper_->set_dt(h);
    try {
      StepResult r = stepper_->cn_step(u_);
      Vec diff = r.u;
      axpy(-1.0, u_, diff);
      const double rate = stepper_->m1_norm(diff) / h;
      u_ = std::move(r.u);
      p_ = std::move(r.p);
      t_ += h;
      ++steps_;
      last_iterations_ = r.report.picard_iterations;
      if (cfg_.steady_tol > 0.0 && rate <= cfg_.steady_tol) steady_ = true;
      return r.report;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::StepFailure || attempt > 0) throw;
      dt_ /= 2;
      ++halvings_;
    }
  }
}

DiagnosticsRecord Simulation::diagnostics() const { return measure(*ctx_, u_, t_, last_iterations_); }

std::optional<double> Simulation::velocity_error() const {
  if (!case_.exact) return std::nullopt;
  const double t = t_;
  return l2_error(*ctx_, u_, [&](double x, double y) { return case_.exact(x, y, t); });
}

void Simulation::write_snapshot(const std::string& path) const {
  const MultipatchSpace& s = ctx_->space();
  const GridSpec& g = cfg_.grid;
  const int nx = cfg_.output.sample_nx, ny = cfg_.output.sample_ny;
  const Field u{Slot::V1, Conformity::Broken, u_};
  const Field p{Slot::V2, Conformity::Broken, p_};
  const Field w{Slot::V0, Conformity::Broken, vorticity(*ctx_, u_)};
  File out(path);
  std::fprintf(out.f, "# feecns snapshot\n# shape %d %d\n# bounds %.17g %.17g %.17g %.17g\n# time %.17g\n", nx, ny,
               g.x0, g.x1, g.y0, g.y1, t_);
  std::fprintf(out.f, "# columns x y u_x u_y p omega\n");
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double x = g.x0 + (g.x1 - g.x0) * i / (nx - 1), y = g.y0 + (g.y1 - g.y0) * j / (ny - 1);
      const auto uv = eval_field(s, u, x, y);
      std::fprintf(out.f, "%.17g %.17g %.17g %.17g %.17g %.17g\n", x, y, uv[0], uv[1], eval_field(s, p, x, y)[0],
                   eval_field(s, w, x, y)[0]);
    }
  if (std::ferror(out.f)) fail(ErrorCode::IoError, "write failed: " + path);
}

RunSummary run(const SimulationConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  Simulation sim(cfg);
  const std::filesystem::path dir(cfg.output.dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::IoError, "cannot create output directory " + dir.string() + ": " + ec.message());
  const auto snapshot_path = [&](const std::string& tag) { return (dir / ("snapshot_" + tag + ".txt")).string(); };
  const auto step_tag = [](int n) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%06d", n);
    return std::string(buf);
  };

  RunSummary summary;
  File csv((dir / cfg.output.diagnostics).string());
  std::fprintf(csv.f, "time,energy,mom_x,mom_y,div_l2,jump_energy,enstrophy_term,picard_iters\n");
  write_row(csv.f, sim.diagnostics());
  const int every = cfg.output.snapshot_every;
  if (every > 0) sim.write_snapshot(snapshot_path(step_tag(0)));
  while (!sim.finished()) {
    try {
      sim.step();
    } catch (const Error& e) {
      if (e.code() != ErrorCode::StepFailure) throw;
      summary.ok = false;
      summary.message = e.what();
      sim.write_snapshot(snapshot_path("last_good"));
      break;
    }
    write_row(csv.f, sim.diagnostics());
    if (every > 0 && sim.steps() % every == 0) sim.write_snapshot(snapshot_path(step_tag(sim.steps())));
  }
  if (summary.ok && every > 0 && sim.steps() % every != 0) sim.write_snapshot(snapshot_path(step_tag(sim.steps())));
  std::fflush(csv.f);
  if (std::ferror(csv.f)) fail(ErrorCode::IoError, "write failed: " + cfg.output.diagnostics);

  summary.steps = sim.steps();
  summary.time = sim.time();
  summary.steady = sim.steady();
  summary.dt_halvings = sim.dt_halvings();
  summary.velocity_error = sim.velocity_error();
  summary.final_record = sim.diagnostics();
  summary.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return summary;
}

std::string summary_line(const SimulationConfig& cfg, const RunSummary& s) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%s %s: steps=%d t=%.6g%s wall=%.3fs energy=%.10g div_l2=%.3e", cfg.case_name.c_str(),
                s.ok ? "done" : "FAILED", s.steps, s.time, s.steady ? " (steady)" : "", s.wall_seconds,
                s.final_record.energy, s.final_record.div_l2);
  std::string line = buf;
  if (s.velocity_error) {
    std::snprintf(buf, sizeof buf, " l2_error=%.6e", *s.velocity_error);
    line += buf;
  }
  if (s.dt_halvings > 0) line += " dt_halvings=" + std::to_string(s.dt_halvings);
  if (!s.ok) line += " error: " + s.message;
  return line;
}

int default_thread_count() {
  if (const char* env = std::getenv("FEECNS_NUM_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<int>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<ConvergenceRow> convergence_study(const SimulationConfig& cfg, const std::vector<int>& meshes,
                                              const std::vector<int>& degrees, int threads) {
  require(!meshes.empty() && !degrees.empty(), ErrorCode::InvalidArgument, "convergence_study: empty mesh or degree list");
  require(case_library(cfg.case_name, cfg.nu).exact != nullptr, ErrorCode::ConfigError,
          "convergence_study: case " + cfg.case_name + " has no exact solution");
  std::vector<ConvergenceRow> rows;
  for (int p : degrees)
    for (int m : meshes) rows.push_back({p, m, (cfg.grid.x1 - cfg.grid.x0) / m, kNaN, kNaN, ""});

  const auto run_one = [&](ConvergenceRow& row) {
    try {
      SimulationConfig c = cfg;
      c.grid.degree = row.degree;
      if (row.n_cells <= 0 || row.n_cells % c.grid.patches_x != 0 || row.n_cells % c.grid.patches_y != 0)
        fail(ErrorCode::ConfigError, "mesh " + std::to_string(row.n_cells) + " is not divisible by the patch counts");
      c.grid.cells_x = row.n_cells / c.grid.patches_x;
      c.grid.cells_y = row.n_cells / c.grid.patches_y;
      Simulation sim(c);
      while (!sim.finished()) sim.step();
      row.error = *sim.velocity_error();
      row.status = "ok";
    } catch (const std::exception& e) {
      row.error = kNaN;
      row.status = e.what();
    }
  };

  const int n = static_cast<int>(rows.size());
  const int workers = std::clamp(threads > 0 ? threads : default_thread_count(), 1, n);
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) run_one(rows[i]);
    });
  for (auto& t : pool) t.join();

  for (int p : degrees) {
    std::vector<std::pair<double, double>> samples;
    for (const auto& r : rows)
      if (r.degree == p && r.status == "ok") samples.push_back({r.h, r.error});
    std::sort(samples.begin(), samples.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    double order = kNaN;
    try {
      if (samples.size() >= 2) order = convergence_order(samples);
    } catch (const Error&) {
      // zero errors (exactly representable solutions) have no order
    }
    for (auto& r : rows)
      if (r.degree == p) r.order = order;
  }
  return rows;
}

void write_convergence_csv(const std::vector<ConvergenceRow>& rows, const std::string& path) {
  File out(path);
  std::fprintf(out.f, "degree,n_cells,h,error,order,status\n");
  for (const auto& r : rows) {
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    std::fprintf(out.f, "%d,%d,%.17g,%.17g,%.17g,%s\n", r.degree, r.n_cells, r.h, r.error, r.order, status.c_str());
  }
  if (std::ferror(out.f)) fail(ErrorCode::IoError, "write failed: " + path);
}

}  // namespace feecns
