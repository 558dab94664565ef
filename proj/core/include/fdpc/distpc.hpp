#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fdpc/objective.hpp"
#include "fdpc/oracle.hpp"
#include "fdpc/scenario.hpp"
#include "fdpc/utility.hpp"

// Synchronous primal-dual power control. Each round reads only the state of
// the previous round:
//
//   downlink  P^_j <- Proj(P^_j + gamma q_j)
//   uplink    P^_i <- clip(P^_i + gamma (q_i - sum_{j in N_i} m_ij P_i)),
//             m_ij = (q_j / IN_j) g_ij
//   prices    q    <- max(q_min, q + gamma (min(r_max, (U')^{-1}(q)) - log SINR))
//
// The loop runs on c * U for a common price_scale c > 0. Maximizers do not
// depend on c; prices in the state and trace are those of c * U.

namespace fdpc {

enum class LinkDir { uplink, downlink };

struct AlgoParams {
  double gamma = 0.05;
  int max_iters = 5000;
  double stop_tol = 1e-9;  // relative utility change over stop_window rounds
  int stop_window = 50;
  double q_min = 1e-8;
  double r_max = 50.0;
  /// 0 selects the scale from the utilities' curvature at the initial point;
  /// 1 runs on the utilities as given.
  double price_scale = 0.0;
  /// Optional multiplicative perturbation of the SINR fed to the price update.
  std::function<double(LinkDir, std::size_t index, int round, double sinr)> sinr_noise;

  /// Throws std::invalid_argument.
  void validate() const;
};

enum class RunStatus { running, converged, max_iters, unstable };

std::string to_string(RunStatus status);

struct TraceRow {
  int iter = 0;
  double sum_utility = 0.0;
  double eps = 0.0;  // |sum_utility - U*|, NaN without an oracle
  std::vector<double> p_ul;
  std::vector<double> p_dl;
  std::vector<double> q_ul;
  std::vector<double> q_dl;
};

struct AlgoState {
  int t = 0;
  std::vector<double> q_ul;
  std::vector<double> q_dl;
  std::vector<double> p_hat_ul;
  std::vector<double> p_hat_dl;
  std::vector<double> in_dl;
  std::vector<double> r_ul;  // target rates of the last price update
  std::vector<double> r_dl;
  double price_scale = 1.0;
  std::vector<TraceRow> trace;
  RunStatus status = RunStatus::running;
  std::string note;

  PowerAllocation powers() const;
};

/// Initial point: uplink at P_max, downlink budget split evenly (projected onto the
/// floors if the even split violates them), prices at q_min.
AlgoState init(const Scenario& s, const AlgoParams& params);

double resolve_price_scale(const Scenario& s, const Utilities& utils, const AlgoParams& params);

/// Downlink power update for all users.
std::vector<double> dl_power_step(const AlgoState& state, const Scenario& s,
                                  const AlgoParams& params);

/// One uplink user's power update, given the power-weighted metrics m_ij P_i of
/// its neighbors in neighbor order.
double ul_power_update(double p_hat, double q, const std::vector<double>& weighted_terms,
                       double log_lo, double log_hi, double gamma);

/// Uplink power update for all users. metrics[i] holds m_ij for j in s.nbr.of_ul[i],
/// in that order; throws std::invalid_argument if any is missing.
std::vector<double> ul_power_step(const AlgoState& state, const Scenario& s,
                                  const AlgoParams& params,
                                  const std::vector<std::vector<double>>& metrics);

/// m_ij = (q_j / IN_j) g_ij for every neighbor pair, from the state.
std::vector<std::vector<double>> direct_metrics(const AlgoState& state, const Scenario& s);

/// One price update. Returns {new price, target rate}.
struct PriceUpdate {
  double q;
  double target_rate;
};
PriceUpdate price_update(const UtilityFn& u, double q, double sinr, const AlgoParams& params);

/// Price update for all users with SINRs from the state's powers. scaled_utils are
/// the utilities the loop runs on (already multiplied by the price scale).
void price_step(AlgoState& state, const Scenario& s, const Utilities& scaled_utils,
                const AlgoParams& params);

/// Records trace rows and decides when to stop. Shared by the plain and the
/// one-hop drivers so their traces agree.
class RoundMonitor {
 public:
  RoundMonitor(const Scenario& s, const Utilities& utils, const AlgoParams& params,
               std::optional<double> utility_star);

  /// Appends a row for the state's current powers and updates state.status.
  void record(AlgoState& state);

 private:
  bool oscillating_at_bound(const AlgoState& state) const;

  const Scenario& s_;
  const Utilities& utils_;
  const AlgoParams& params_;
  std::optional<double> u_star_;
  int osc_rounds_ = 0;
};

/// Iterates rounds until the utility settles, max_iters, or instability.
/// With an oracle result the trace carries eps and overshooting U* counts as
/// instability.
AlgoState run(const Scenario& s, const Utilities& utils, const AlgoParams& params,
              const OracleResult* oracle = nullptr);

/// Header: iter,sum_utility,eps,p_ul_1..,p_dl_1..,q_ul_1..,q_dl_1..
void write_trace_csv(std::ostream& out, const AlgoState& state);

}  // namespace fdpc
