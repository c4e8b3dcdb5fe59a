// Command-line driver: run a configured case or a convergence study.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "feecns/feecns.h"

namespace {

// Exit codes: 0 success, 1 run or sub-run failure, 2 configuration or usage error, 3 other errors.
int exit_code(feecns_status st) {
  switch (st) {
    case FEECNS_OK: return 0;
    case FEECNS_ERR_CONFIG:
    case FEECNS_ERR_INVALID_ARGUMENT: return 2;
    case FEECNS_ERR_STEP_FAILURE: return 1;
    default: return 3;
  }
}

struct Overrides {
  std::optional<double> dt, alpha, nu, tol;
  std::optional<int> p, nc, np;
  std::optional<std::string> out;

  void add(CLI::App* app) {
    app->add_option("--dt", dt, "time step");
    app->add_option("--p", p, "spline degree")->check(CLI::PositiveNumber);
    app->add_option("--nc", nc, "cells per patch in each direction")->check(CLI::PositiveNumber);
    app->add_option("--np", np, "patches in each direction")->check(CLI::PositiveNumber);
    app->add_option("--alpha", alpha, "jump penalization");
    app->add_option("--nu", nu, "viscosity");
    app->add_option("--tol", tol, "Picard and steady-state tolerance; the pressure CG uses tol/100");
    app->add_option("--out", out, "output directory");
  }
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

feecns_status load(const std::string& path, const Overrides& o, feecns_config** cfg) {
  feecns_status st = feecns_config_load(path.c_str(), cfg);
  if (st != FEECNS_OK) return st;
  std::vector<std::pair<std::string, std::string>> kv;
  if (o.dt) kv.push_back({"stepper.dt", num(*o.dt)});
  if (o.p) kv.push_back({"grid.degree", std::to_string(*o.p)});
  if (o.nc) {
    kv.push_back({"grid.cells_x", std::to_string(*o.nc)});
    kv.push_back({"grid.cells_y", std::to_string(*o.nc)});
  }
  if (o.np) {
    kv.push_back({"grid.patches_x", std::to_string(*o.np)});
    kv.push_back({"grid.patches_y", std::to_string(*o.np)});
  }
  if (o.alpha) kv.push_back({"physics.alpha", num(*o.alpha)});
  if (o.nu) kv.push_back({"physics.nu", num(*o.nu)});
  if (o.tol) {
    kv.push_back({"stepper.cg_tol", num(*o.tol / 100)});
    kv.push_back({"stepper.picard_tol", num(*o.tol)});
    char steady[64];
    if (feecns_config_get(*cfg, "stepper.steady_tol", steady, sizeof steady, nullptr) == FEECNS_OK &&
        std::stod(steady) > 0.0)
      kv.push_back({"stepper.steady_tol", num(*o.tol)});
  }
  if (o.out) kv.push_back({"output.dir", *o.out});
  for (const auto& [k, v] : kv)
    if ((st = feecns_config_set(*cfg, k.c_str(), v.c_str())) != FEECNS_OK) return st;
  return feecns_config_validate(*cfg);
}

int report(feecns_status st) {
  std::fprintf(stderr, "feecns: %s: %s\n", feecns_status_string(st), feecns_last_error());
  return exit_code(st);
}

std::string get(const feecns_config* cfg, const char* key) {
  char buf[4096];
  return feecns_config_get(cfg, key, buf, sizeof buf, nullptr) == FEECNS_OK ? buf : "";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"feecns: structure-preserving spline solver for 2D incompressible Navier-Stokes"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides run_o, conv_o;
  CLI::App* run_cmd = app.add_subcommand("run", "run a case to t_final or steady state");
  run_cmd->add_option("config", config_path, "INI configuration file")->required();
  run_o.add(run_cmd);

  std::vector<int> meshes{8, 16, 32}, degrees{1, 2};
  std::string csv;
  int threads = 0;
  CLI::App* conv_cmd = app.add_subcommand("converge", "L2 error table over meshes and degrees");
  conv_cmd->add_option("config", config_path, "INI configuration file")->required();
  conv_cmd->add_option("--meshes", meshes, "cells per direction over the whole domain")->delimiter(',');
  conv_cmd->add_option("--degrees", degrees, "spline degrees")->delimiter(',');
  conv_cmd->add_option("--csv", csv, "table path (default <out>/convergence.csv)");
  conv_cmd->add_option("--threads", threads, "concurrent sub-runs (default FEECNS_NUM_THREADS or all cores)");
  conv_o.add(conv_cmd);

  std::string case_name;
  CLI::App* tmpl_cmd = app.add_subcommand("template", "print the default configuration of a case");
  tmpl_cmd->add_option("case", case_name,
                       "taylor_green, poiseuille, lid_driven_cavity, blasius, double_shear_layer or quiescent")
      ->required();

  CLI11_PARSE(app, argc, argv);

  feecns_config* cfg = nullptr;
  int code = 0;
  if (*tmpl_cmd) {
    feecns_status st = feecns_config_from_case(case_name.c_str(), &cfg);
    size_t n = 0;
    if (st == FEECNS_OK) feecns_config_serialize(cfg, nullptr, 0, &n);
    std::string text(n, '\0');
    if (st == FEECNS_OK) st = feecns_config_serialize(cfg, text.data(), n, nullptr);
    if (st == FEECNS_OK)
      std::fputs(text.c_str(), stdout);
    else
      code = report(st);
  } else if (*run_cmd) {
    feecns_status st = load(config_path, run_o, &cfg);
    feecns_run_summary s{};
    if (st == FEECNS_OK) st = feecns_run(cfg, &s);
    char line[1024];
    if (st != FEECNS_OK) {
      code = report(st);
    } else if (feecns_summary_line(cfg, &s, line, sizeof line) == FEECNS_OK) {
      std::printf("%s\n", line);
      code = s.ok ? 0 : 1;
    }
  } else if (*conv_cmd) {
    feecns_status st = load(config_path, conv_o, &cfg);
    if (st == FEECNS_OK) {
      const std::filesystem::path dir(get(cfg, "output.dir"));
      std::error_code ec;
      if (csv.empty()) {
        std::filesystem::create_directories(dir, ec);
        csv = (dir / "convergence.csv").string();
      }
      int failed = 0;
      st = feecns_converge(cfg, meshes.data(), meshes.size(), degrees.data(), degrees.size(), threads, csv.c_str(),
                           &failed);
      if (st == FEECNS_OK) {
        if (std::FILE* f = std::fopen(csv.c_str(), "r")) {
          char buf[4096];
          size_t n;
          while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) std::fwrite(buf, 1, n, stdout);
          std::fclose(f);
        }
        std::printf("table written to %s (%d failed sub-runs)\n", csv.c_str(), failed);
        code = failed ? 1 : 0;
      }
    }
    if (st != FEECNS_OK) code = report(st);
  }
  feecns_config_free(cfg);
  return code;
}
