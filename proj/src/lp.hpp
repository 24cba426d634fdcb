#pragma once

#include <optional>
#include <vector>

namespace singtrace::detail {

/// Phase-one simplex: some x >= 0 with rows * x = rhs, or nullopt when the
/// artificial objective cannot be driven below `tol`. Dense tableau with
/// Bland's rule; meant for a few hundred rows.
std::optional<std::vector<double>> feasible_point(
    std::vector<std::vector<double>> rows, std::vector<double> rhs,
    double tol);

}  // namespace singtrace::detail
