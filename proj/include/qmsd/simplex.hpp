#pragma once

// Phase-1 simplex for the feasibility problem A x = b, x >= 0.
// Dense tableau, Bland's rule. Sized for the handful of constraints that
// polytope membership needs; not a general LP solver.

#include <cmath>
#include <cstddef>
#include <vector>

#include "qmsd/errors.hpp"

namespace qmsd::lp {

struct FeasibilityResult {
  bool feasible = false;
  /// Optimal phase-1 objective: sum of artificial variables (>= 0).
  double infeasibility = 0.0;
  std::vector<double> x;
  int pivots = 0;
};

/// `a` is row-major with `rows` rows and `cols` columns.
inline FeasibilityResult find_feasible_point(const std::vector<double>& a, const std::vector<double>& b,
                                             std::size_t rows, std::size_t cols, double tol = 1e-9) {
  if (a.size() != rows * cols || b.size() != rows) throw DimensionError("find_feasible_point: shape mismatch");
  constexpr double kPivotEps = 1e-12;
  const std::size_t width = cols + rows + 1;  // originals, artificials, rhs
  std::vector<double> t(rows * width, 0.0);
  std::vector<double> cost(width, 0.0);
  std::vector<std::size_t> basis(rows);

  auto at = [&](std::size_t r, std::size_t c) -> double& { return t[r * width + c]; };

  for (std::size_t r = 0; r < rows; ++r) {
    const double sign = b[r] < 0 ? -1.0 : 1.0;
    for (std::size_t c = 0; c < cols; ++c) at(r, c) = sign * a[r * cols + c];
    at(r, cols + r) = 1.0;
    at(r, width - 1) = sign * b[r];
    basis[r] = cols + r;
  }
  // Reduced costs of min sum(artificials); last slot holds -objective.
  for (std::size_t c = 0; c < width; ++c) {
    if (c >= cols && c < cols + rows) continue;
    double s = 0.0;
    for (std::size_t r = 0; r < rows; ++r) s += at(r, c);
    cost[c] = -s;
  }

  FeasibilityResult result;
  const int max_pivots = 50 * static_cast<int>(rows + cols) + 100;
  while (result.pivots < max_pivots) {
    std::size_t enter = width;
    for (std::size_t c = 0; c + 1 < width; ++c)
      if (cost[c] < -kPivotEps) {
        enter = c;
        break;
      }
    if (enter == width) break;

    std::size_t leave = rows;
    double best = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
      const double coef = at(r, enter);
      if (coef <= kPivotEps) continue;
      const double ratio = at(r, width - 1) / coef;
      if (leave == rows || ratio < best - kPivotEps ||
          (std::abs(ratio - best) <= kPivotEps && basis[r] < basis[leave])) {
        leave = r;
        best = ratio;
      }
    }
    if (leave == rows) break;  // unbounded direction; cannot happen for phase 1

    const double piv = at(leave, enter);
    for (std::size_t c = 0; c < width; ++c) at(leave, c) /= piv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == leave) continue;
      const double f = at(r, enter);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < width; ++c) at(r, c) -= f * at(leave, c);
    }
    const double f = cost[enter];
    for (std::size_t c = 0; c < width; ++c) cost[c] -= f * at(leave, c);
    basis[leave] = enter;
    ++result.pivots;
  }

  result.infeasibility = std::max(0.0, -cost[width - 1]);
  result.feasible = result.infeasibility <= tol;
  result.x.assign(cols, 0.0);
  for (std::size_t r = 0; r < rows; ++r)
    if (basis[r] < cols) result.x[basis[r]] = at(r, width - 1);
  return result;
}

}  // namespace qmsd::lp
