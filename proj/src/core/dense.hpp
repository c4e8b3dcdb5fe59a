#pragma once

#include <vector>

namespace feecns {

// Solves the n x n row-major system a x = b in place by partial pivoting.
// Returns false when a pivot falls below rel_tol times the largest entry.
bool solve_dense(std::vector<double>& a, std::vector<double>& b, int n, double rel_tol = 1e-13);

}  // namespace feecns
