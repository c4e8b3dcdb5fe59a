#ifndef FEECNS_FEECNS_H
#define FEECNS_FEECNS_H

/* C interface of the feecns incompressible Navier-Stokes solver.
 * Every function returns a status code; on failure feecns_last_error() describes the error
 * raised on the calling thread. Handles are opaque and owned by the caller. */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define FEECNS_API __attribute__((visibility("default")))
#else
#define FEECNS_API
#endif

typedef enum feecns_status {
  FEECNS_OK = 0,
  FEECNS_ERR_INVALID_ARGUMENT = 1,
  FEECNS_ERR_CONFIG = 2,
  FEECNS_ERR_IO = 3,
  FEECNS_ERR_NUMERICAL_BREAKDOWN = 4,
  FEECNS_ERR_FACTORIZATION = 5,
  FEECNS_ERR_STEP_FAILURE = 6,
  FEECNS_ERR_INCOMPATIBLE = 7,
  FEECNS_ERR_OUT_OF_DOMAIN = 8,
  FEECNS_ERR_DEGENERATE_STENCIL = 9,
  FEECNS_ERR_DATA = 10,
  FEECNS_ERR_INTERNAL = 99
} feecns_status;

typedef struct feecns_config feecns_config;
typedef struct feecns_simulation feecns_simulation;

typedef struct feecns_diagnostics {
  double time;
  double energy;
  double momentum[2];
  double div_l2;
  double jump_energy;
  double enstrophy_term;
  int picard_iterations;
} feecns_diagnostics;

typedef struct feecns_run_summary {
  int ok;      /* 0 when a step failed; the run then stopped early */
  int steps;
  int steady;  /* steady state detected before t_final */
  int dt_halvings;
  double time;
  double wall_seconds;
  double velocity_error; /* NaN when the case has no exact solution */
  feecns_diagnostics final_record;
} feecns_run_summary;

FEECNS_API const char* feecns_last_error(void);
FEECNS_API const char* feecns_status_string(feecns_status status);

/* Configuration. Keys are "section.name", e.g. "stepper.dt" or "boundary.left.kind". */
FEECNS_API feecns_status feecns_config_from_case(const char* case_name, feecns_config** out);
/* Loads an INI file; FEECNS_OUTPUT_DIR, when set, replaces output.dir. */
FEECNS_API feecns_status feecns_config_load(const char* path, feecns_config** out);
FEECNS_API feecns_status feecns_config_save(const feecns_config* cfg, const char* path);
FEECNS_API feecns_status feecns_config_set(feecns_config* cfg, const char* key, const char* value);
/* Copies the value with its terminating zero into buf; *needed (optional) receives the full size. */
FEECNS_API feecns_status feecns_config_get(const feecns_config* cfg, const char* key, char* buf, size_t len,
                                           size_t* needed);
/* INI text of the full configuration, same buffer protocol as feecns_config_get. */
FEECNS_API feecns_status feecns_config_serialize(const feecns_config* cfg, char* buf, size_t len, size_t* needed);
FEECNS_API feecns_status feecns_config_validate(const feecns_config* cfg);
FEECNS_API void feecns_config_free(feecns_config* cfg);

/* Whole runs. A step failure is reported through summary->ok with status FEECNS_OK. */
FEECNS_API feecns_status feecns_run(const feecns_config* cfg, feecns_run_summary* summary);
/* Formats the one-line summary printed by the command-line tool. */
FEECNS_API feecns_status feecns_summary_line(const feecns_config* cfg, const feecns_run_summary* summary, char* buf,
                                             size_t len);
/* Runs every (degree, mesh) pair, mesh = cells per direction, and writes the CSV table.
 * threads = 0 uses FEECNS_NUM_THREADS or the hardware concurrency. *failed (optional) receives the
 * number of failed sub-runs. */
FEECNS_API feecns_status feecns_converge(const feecns_config* cfg, const int* meshes, size_t n_meshes,
                                         const int* degrees, size_t n_degrees, int threads, const char* csv_path,
                                         int* failed);

/* Step-by-step control. */
FEECNS_API feecns_status feecns_simulation_create(const feecns_config* cfg, feecns_simulation** out);
/* Advances at most n steps, stopping early at t_final or steady state; *done (optional) receives the count. */
FEECNS_API feecns_status feecns_simulation_advance(feecns_simulation* sim, int n, int* done);
FEECNS_API feecns_status feecns_simulation_finished(const feecns_simulation* sim, int* finished);
FEECNS_API feecns_status feecns_simulation_diagnostics(const feecns_simulation* sim, feecns_diagnostics* out);
/* NaN when the case has no exact solution. */
FEECNS_API feecns_status feecns_simulation_velocity_error(const feecns_simulation* sim, double* out);
FEECNS_API feecns_status feecns_simulation_write_snapshot(const feecns_simulation* sim, const char* path);
FEECNS_API void feecns_simulation_free(feecns_simulation* sim);

#ifdef __cplusplus
}
#endif

#endif
