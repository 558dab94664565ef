#pragma once

#include <vector>

#include "fdpc/scenario.hpp"
#include "fdpc/utility.hpp"

// The log-power program with the rate constraints made tight:
//
//   F(x) = sum_i U_i(log(M g_i / N0) + x_i)
//        + sum_j U_j(log(M g_j) + x_j - log(sum_{i in N_j} g_ij e^{x_i} + N0))
//
// which is concave in x = (log P_ul, log P_dl). Its gradient is assembled from
// the dual-subproblem gradients with prices q = U'(r):
//
//   dF/dx_i(ul) = q_i - sum_{j : i in N_j} q_j g_ij e^{x_i} / IN_j
//   dF/dx_j(dl) = q_j

namespace fdpc {

struct Rates {
  std::vector<double> ul;
  std::vector<double> dl;
};

struct Prices {
  std::vector<double> ul;
  std::vector<double> dl;
};

/// High-SINR rates, plus the interference-plus-noise seen by each downlink user.
struct LinkState {
  Rates rates;
  std::vector<double> in_dl;
};

LinkState link_state(const Scenario& s, const PowerAllocation& p);

/// q = U'(r) at the high-SINR rates of p.
Prices marginal_prices(const Scenario& s, const Utilities& utils, const PowerAllocation& p);

/// Gradient of the substituted objective given the prices.
LogPowers assemble_gradient(const Scenario& s, const Prices& q, const PowerAllocation& p,
                            const std::vector<double>& in_dl);

struct ObjectiveEval {
  double value = 0.0;
  LogPowers gradient;
};

double objective_value(const Scenario& s, const Utilities& utils, const LogPowers& x);

/// F(to) - F(from), accumulated per user from rate changes so that steps far
/// below the rounding of F itself are still resolved.
double objective_change(const Scenario& s, const Utilities& utils, const LogPowers& from,
                        const LogPowers& to);

ObjectiveEval evaluate_objective(const Scenario& s, const Utilities& utils, const LogPowers& x);

}  // namespace fdpc
