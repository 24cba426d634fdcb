#include "lp.hpp"

#include <cmath>
#include <cstddef>

namespace singtrace::detail {

std::optional<std::vector<double>> feasible_point(
    std::vector<std::vector<double>> rows, std::vector<double> rhs,
    double tol) {
  constexpr double kPivotEps = 1e-12;
  const std::size_t m = rows.size();
  const std::size_t n = m ? rows[0].size() : 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (rhs[i] < 0.0) {
      for (double& v : rows[i]) v = -v;
      rhs[i] = -rhs[i];
    }
  }
  // Columns: n originals, m artificials, then the right-hand side.
  const std::size_t width = n + m + 1;
  std::vector<double> t(m * width, 0.0);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return t[i * width + j]; };
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) at(i, j) = rows[i][j];
    at(i, n + i) = 1.0;
    at(i, n + m) = rhs[i];
    basis[i] = n + i;
  }
  // Reduced gains of the phase-one objective (maximize -sum artificials).
  std::vector<double> gain(width, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) gain[j] += at(i, j);
  for (std::size_t i = 0; i < m; ++i) gain[n + m] += at(i, n + m);

  for (;;) {
    std::size_t enter = width;
    for (std::size_t j = 0; j < n + m; ++j)
      if (gain[j] > kPivotEps) {
        enter = j;
        break;
      }
    if (enter == width) break;
    std::size_t leave = m;
    double best = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double a = at(i, enter);
      if (a <= kPivotEps) continue;
      const double ratio = at(i, n + m) / a;
      if (leave == m || ratio < best - 1e-15 ||
          (std::abs(ratio - best) <= 1e-15 && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == m) break;  // unbounded gain cannot happen in phase one
    const double p = at(leave, enter);
    for (std::size_t j = 0; j < width; ++j) at(leave, j) /= p;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave) continue;
      const double f = at(i, enter);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < width; ++j) at(i, j) -= f * at(leave, j);
    }
    const double g = gain[enter];
    for (std::size_t j = 0; j < width; ++j) gain[j] -= g * at(leave, j);
    basis[leave] = enter;
  }
  if (gain[n + m] > tol) return std::nullopt;
  std::vector<double> x(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) x[basis[i]] = std::max(0.0, at(i, n + m));
  return x;
}

}  // namespace singtrace::detail
