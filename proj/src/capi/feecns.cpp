#include "feecns/feecns.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <limits>
#include <memory>
#include <new>
#include <string>

#include "cases/config.hpp"
#include "cases/simulation.hpp"
#include "core/errors.hpp"

struct feecns_config {
  feecns::SimulationConfig cfg;
};

struct feecns_simulation {
  std::unique_ptr<feecns::Simulation> sim;
};

namespace {

thread_local std::string last_error;

template <class F>
feecns_status guarded(F&& f) {
  last_error.clear();
  try {
    f();
    return FEECNS_OK;
  } catch (const feecns::Error& e) {
    last_error = e.what();
    return static_cast<feecns_status>(static_cast<int>(e.code()));
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown error";
  }
  return FEECNS_ERR_INTERNAL;
}

void need(const void* p, const char* what) {
  if (!p) feecns::fail(feecns::ErrorCode::InvalidArgument, std::string(what) + " is null");
}

feecns_diagnostics to_c(const feecns::DiagnosticsRecord& r) {
  feecns_diagnostics d;
  d.time = r.time;
  d.energy = r.energy;
  d.momentum[0] = r.momentum[0];
  d.momentum[1] = r.momentum[1];
  d.div_l2 = r.div_l2;
  d.jump_energy = r.jump_energy;
  d.enstrophy_term = r.enstrophy_term;
  d.picard_iterations = r.picard_iterations;
  return d;
}

void copy_out(const std::string& s, char* buf, size_t len) {
  need(buf, "buf");
  if (len < s.size() + 1) feecns::fail(feecns::ErrorCode::InvalidArgument, "buffer too small");
  std::memcpy(buf, s.c_str(), s.size() + 1);
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

extern "C" {

const char* feecns_last_error(void) { return last_error.c_str(); }

const char* feecns_status_string(feecns_status status) {
  switch (status) {
    case FEECNS_OK: return "ok";
    case FEECNS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case FEECNS_ERR_CONFIG: return "configuration error";
    case FEECNS_ERR_IO: return "i/o error";
    case FEECNS_ERR_NUMERICAL_BREAKDOWN: return "numerical breakdown";
    case FEECNS_ERR_FACTORIZATION: return "factorization failure";
    case FEECNS_ERR_STEP_FAILURE: return "step failure";
    case FEECNS_ERR_INCOMPATIBLE: return "incompatible operands";
    case FEECNS_ERR_OUT_OF_DOMAIN: return "point outside the domain";
    case FEECNS_ERR_DEGENERATE_STENCIL: return "degenerate stencil";
    case FEECNS_ERR_DATA: return "invalid data";
    case FEECNS_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

feecns_status feecns_config_from_case(const char* case_name, feecns_config** out) {
  return guarded([&] {
    need(case_name, "case_name");
    need(out, "out");
    *out = new feecns_config{feecns::default_config(case_name)};
  });
}

feecns_status feecns_config_load(const char* path, feecns_config** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    auto c = std::make_unique<feecns_config>(feecns_config{feecns::load_config(path)});
    feecns::apply_environment(c->cfg);
    *out = c.release();
  });
}

feecns_status feecns_config_save(const feecns_config* cfg, const char* path) {
  return guarded([&] {
    need(cfg, "cfg");
    need(path, "path");
    feecns::save_config(cfg->cfg, path);
  });
}

feecns_status feecns_config_set(feecns_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    need(cfg, "cfg");
    need(key, "key");
    need(value, "value");
    feecns::set_config_value(cfg->cfg, key, value);
  });
}

feecns_status feecns_config_get(const feecns_config* cfg, const char* key, char* buf, size_t len, size_t* needed) {
  return guarded([&] {
    need(cfg, "cfg");
    need(key, "key");
    const std::string v = feecns::get_config_value(cfg->cfg, key);
    if (needed) *needed = v.size() + 1;
    copy_out(v, buf, len);
  });
}

feecns_status feecns_config_serialize(const feecns_config* cfg, char* buf, size_t len, size_t* needed) {
  return guarded([&] {
    need(cfg, "cfg");
    const std::string v = feecns::serialize_config(cfg->cfg);
    if (needed) *needed = v.size() + 1;
    copy_out(v, buf, len);
  });
}

feecns_status feecns_config_validate(const feecns_config* cfg) {
  return guarded([&] {
    need(cfg, "cfg");
    feecns::validate(cfg->cfg);
  });
}

void feecns_config_free(feecns_config* cfg) { delete cfg; }

feecns_status feecns_run(const feecns_config* cfg, feecns_run_summary* summary) {
  return guarded([&] {
    need(cfg, "cfg");
    need(summary, "summary");
    const feecns::RunSummary s = feecns::run(cfg->cfg);
    summary->ok = s.ok;
    summary->steps = s.steps;
    summary->steady = s.steady;
    summary->dt_halvings = s.dt_halvings;
    summary->time = s.time;
    summary->wall_seconds = s.wall_seconds;
    summary->velocity_error = s.velocity_error.value_or(kNaN);
    summary->final_record = to_c(s.final_record);
    if (!s.ok) last_error = s.message;
  });
}

feecns_status feecns_summary_line(const feecns_config* cfg, const feecns_run_summary* summary, char* buf,
                                  size_t len) {
  const std::string message = last_error;  // the failure message of the preceding feecns_run
  return guarded([&] {
    need(cfg, "cfg");
    need(summary, "summary");
    feecns::RunSummary s;
    s.ok = summary->ok;
    s.message = summary->ok ? "" : message;
    s.steps = summary->steps;
    s.steady = summary->steady;
    s.dt_halvings = summary->dt_halvings;
    s.time = summary->time;
    s.wall_seconds = summary->wall_seconds;
    if (!std::isnan(summary->velocity_error)) s.velocity_error = summary->velocity_error;
    s.final_record.energy = summary->final_record.energy;
    s.final_record.div_l2 = summary->final_record.div_l2;
    copy_out(feecns::summary_line(cfg->cfg, s), buf, len);
  });
}

feecns_status feecns_converge(const feecns_config* cfg, const int* meshes, size_t n_meshes, const int* degrees,
                              size_t n_degrees, int threads, const char* csv_path, int* failed) {
  return guarded([&] {
    need(cfg, "cfg");
    need(meshes, "meshes");
    need(degrees, "degrees");
    need(csv_path, "csv_path");
    const auto rows = feecns::convergence_study(cfg->cfg, std::vector<int>(meshes, meshes + n_meshes),
                                                std::vector<int>(degrees, degrees + n_degrees), threads);
    feecns::write_convergence_csv(rows, csv_path);
    int bad = 0;
    for (const auto& r : rows) bad += r.status != "ok";
    if (failed) *failed = bad;
  });
}

feecns_status feecns_simulation_create(const feecns_config* cfg, feecns_simulation** out) {
  return guarded([&] {
    need(cfg, "cfg");
    need(out, "out");
    *out = new feecns_simulation{std::make_unique<feecns::Simulation>(cfg->cfg)};
  });
}

feecns_status feecns_simulation_advance(feecns_simulation* sim, int n, int* done) {
  int count = 0;
  const feecns_status st = guarded([&] {
    need(sim, "sim");
    if (n < 0) feecns::fail(feecns::ErrorCode::InvalidArgument, "negative step count");
    while (count < n && !sim->sim->finished()) {
      sim->sim->step();
      ++count;
    }
  });
  if (done) *done = count;
  return st;
}

feecns_status feecns_simulation_finished(const feecns_simulation* sim, int* finished) {
  return guarded([&] {
    need(sim, "sim");
    need(finished, "finished");
    *finished = sim->sim->finished();
  });
}

feecns_status feecns_simulation_diagnostics(const feecns_simulation* sim, feecns_diagnostics* out) {
  return guarded([&] {
    need(sim, "sim");
    need(out, "out");
    *out = to_c(sim->sim->diagnostics());
  });
}

feecns_status feecns_simulation_velocity_error(const feecns_simulation* sim, double* out) {
  return guarded([&] {
    need(sim, "sim");
    need(out, "out");
    *out = sim->sim->velocity_error().value_or(kNaN);
  });
}

feecns_status feecns_simulation_write_snapshot(const feecns_simulation* sim, const char* path) {
  return guarded([&] {
    need(sim, "sim");
    need(path, "path");
    sim->sim->write_snapshot(path);
  });
}

void feecns_simulation_free(feecns_simulation* sim) { delete sim; }

}  // extern "C"
