#pragma once

#include <span>
#include <vector>

namespace fdpc {

/// Principal Lambert W evaluated at e^z, i.e. the w > 0 solving
/// w + log w = z. Stable for |z| in the thousands.
double lambert_w_exp(double z);

/// Componentwise clamp into [lo, hi].
void clip_box(std::span<double> x, std::span<const double> lo, std::span<const double> hi);

struct BudgetProjection {
  std::vector<double> x;
  /// Multiplier of the budget constraint at the projection (0 if slack).
  double multiplier = 0.0;
};

/// Euclidean projection, in log-power coordinates, onto
///   { x : x_j >= log_floor_j, sum_j exp(x_j) <= budget }.
///
/// Stationarity gives x_j = max(log_floor_j, y_j - W(mu e^{y_j})) for the
/// budget multiplier mu >= 0, found by a safeguarded Newton search on log mu.
/// Requires sum_j exp(log_floor_j) <= budget.
BudgetProjection project_log_budget(std::span<const double> y,
                                    std::span<const double> log_floor, double budget);

}  // namespace fdpc
