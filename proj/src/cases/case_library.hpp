#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "multipatch/fields.hpp"
#include "operators/boundary.hpp"

namespace feecns {

using TimeVectorFunction = std::function<std::array<double, 2>(double x, double y, double t)>;

/// Initial and boundary data of a test case, with recommended run parameters.
struct CaseDefinition {
  std::string name;
  GridSpec grid;
  double nu = 0.0;
  double alpha = 0.0;  // jump penalization used with several patches
  double dt = 1e-3;
  double t_final = 0.1;
  double steady_tol = 0.0;  // 0: run to t_final
  std::optional<BoundarySpec> boundary;
  VectorFunction initial;
  TimeVectorFunction exact;  // empty when no exact solution is known
};

std::vector<std::string> case_names();

// The exact data depends on nu for some cases; nu defaults to the case's own value.
// Throws ConfigError for an unknown name.
CaseDefinition case_library(const std::string& name, std::optional<double> nu = std::nullopt);

}  // namespace feecns
