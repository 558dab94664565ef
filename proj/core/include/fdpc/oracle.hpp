#pragma once

#include <span>
#include <string>
#include <vector>

#include "fdpc/objective.hpp"
#include "fdpc/scenario.hpp"
#include "fdpc/utility.hpp"

namespace fdpc {

struct OracleOptions {
  int max_iters = 200000;
  double grad_tol = 1e-8;  // projected-gradient 2-norm
  double initial_step = 1.0;
  double shrink = 0.5;
  double armijo = 1e-4;
  /// Barzilai-Borwein trial step after the first iteration (still
  /// backtracked by the Armijo test).
  bool bb_steps = true;
  /// Pin every uplink user at P_ul_max and optimize only the downlink
  /// (the "naive" baseline).
  bool fix_uplink_at_max = false;
};

struct KktResidual {
  double ul = 0.0;
  double dl = 0.0;
  double max = 0.0;
  double budget_multiplier = 0.0;
};

struct OracleResult {
  PowerAllocation p_star;
  double utility_star = 0.0;
  double grad_norm = 0.0;
  double duality_gap = 0.0;
  int iterations = 0;
  bool converged = false;
  bool budget_binding = false;
  KktResidual kkt;
  Prices prices;                   // U'(r) at p_star
  std::vector<double> objective_trace;  // objective after each accepted step
  std::string status;
};

/// Centralized solve of the high-SINR log-power program by projected
/// gradient ascent with Armijo backtracking along the projection arc.
/// Throws std::invalid_argument on an invalid scenario; non-convergence is
/// reported through `converged`/`status`.
OracleResult solve_centralized(const Scenario& s, const Utilities& utils,
                               const OracleOptions& opts = {});

/// Upper bound on the dual function at the given prices: rate subproblem in
/// closed form, downlink subproblem by water-filling on the budget, uplink
/// subproblem by a short box-constrained ascent plus the first-order bound
/// of its concave objective over the box (tight at a maximizer). ul_start
/// (log powers) warm-starts the uplink ascent.
double dual_value(const Scenario& s, const Utilities& utils, const Prices& q,
                  std::span<const double> ul_start = {});

/// Stationarity residual at p with prices recovered as q = U'(r), after
/// crediting multipliers of the active bounds and the budget.
KktResidual kkt_residual(const Scenario& s, const Utilities& utils, const PowerAllocation& p);

struct GridResult {
  PowerAllocation best;
  double utility = 0.0;
  /// Largest utility change between the best grid point and its grid
  /// neighbors; the true optimum is not expected to beat the grid by more.
  double resolution_bound = 0.0;
  long long evaluated = 0;
};

/// Exhaustive search for K_ul + K_dl <= 4: uplink powers log-spaced on
/// [P0, P_max], downlink powers on a lattice of the budget face
/// sum P = P_tot with P_j >= P0_j. Throws std::invalid_argument past the
/// size guard.
GridResult brute_force_grid(const Scenario& s, const Utilities& utils, int points_per_dim);

}  // namespace fdpc
