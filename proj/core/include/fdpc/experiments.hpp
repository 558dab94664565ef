#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fdpc/distpc.hpp"
#include "fdpc/oracle.hpp"
#include "fdpc/random_scenario.hpp"
#include "fdpc/report.hpp"
#include "fdpc/scenario.hpp"
#include "fdpc/utility.hpp"

namespace fdpc {

struct Level {
  std::size_t num_ul = 0;
  std::size_t num_dl = 0;
  double antennas = 0.0;
};

/// Growing cells drawn from one seed. Users are keyed by index, so level l
/// is a prefix of level l + 1 in every gain.
struct ScenarioSequence {
  double C = 16.0;      // M / (K_ul K_dl)
  double ratio = 0.5;   // K_ul / K_dl
  std::vector<Level> levels;
  std::uint64_t seed = 1;
  LossModel loss;

  /// Level l has K_ul = base_ul 2^l, K_dl = K_ul / ratio, M = round(C K_ul K_dl).
  static ScenarioSequence doubling(double C, int num_levels, std::size_t base_ul = 2,
                                   double ratio = 0.5, std::uint64_t seed = 1,
                                   const LossModel& loss = {});

  /// Throws std::invalid_argument unless users are nested and M increases.
  void validate() const;

  Scenario scenario(std::size_t level) const;
};

/// Share of entries at or below rho * P_max. Throws std::invalid_argument
/// unless 0 < rho < 1.
double theta_fraction(std::span<const double> p_ul, double rho, double p_max);

/// Share of downlink users below omega * P_tot / K_dl.
double psi_fraction(std::span<const double> p_dl, double omega, double p_total);

struct LevelReport {
  std::size_t level = 0;
  Level size;
  std::vector<double> theta;  // one per rho
  double psi = 0.0;
  double mean_p_ul = 0.0;
  double median_p_ul = 0.0;
  double utility_opt = 0.0;
  double utility_naive = 0.0;
  double duality_gap = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct ScalingReport {
  std::vector<double> rhos;
  double omega = 0.5;
  std::vector<LevelReport> levels;

  /// level,K_ul,K_dl,M,theta_<rho>...,psi,mean_p_ul,median_p_ul,
  /// utility_opt,utility_naive,duality_gap,converged
  CsvTable table() const;
};

/// Solves every level with the oracle (and the uplink-at-max baseline).
/// Throws std::runtime_error naming the level if a solve does not converge.
ScalingReport run_scaling(const ScenarioSequence& seq, const UtilityFn& ul_fn,
                          const UtilityFn& dl_fn, std::vector<double> rhos = {0.25, 0.5, 0.75},
                          double omega = 0.5, const OracleOptions& opts = {});

struct SweepPoint {
  double g_inter_db = 0.0;
  double p_ul_star = 0.0;
  double p_dl_star = 0.0;
  double utility_opt = 0.0;
  double utility_naive = 0.0;
  double gap = 0.0;
  double duality_gap = 0.0;
  bool converged = false;
};

/// 1 x 1 cell with the interference gain set to each value in turn; the
/// baseline pins the uplink at P_max and re-optimizes the downlink.
std::vector<SweepPoint> sweep_interference(const ScenarioParams& base,
                                           std::span<const double> g_inter_db,
                                           const Utilities& utils, const OracleOptions& opts = {});

/// g_inter_db,p_ul_star,p_dl_star,utility_opt,utility_naive,gap,duality_gap,converged
CsvTable sweep_table(const std::vector<SweepPoint>& points);

std::vector<double> linspace(double lo, double hi, int n);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t n = 0;
};

/// Least-squares fit of log eps[k] against k for k in [k0, k1], skipping
/// nonpositive or non-finite eps.
LinearFit fit_log_linear(const std::vector<TraceRow>& trace, int k0 = 20, int k1 = 200);

/// First iteration from which the utility stays within rel of its final value.
int settle_iteration(const std::vector<TraceRow>& trace, double rel = 1e-2);

struct ConvergenceRun {
  double gamma = 0.0;
  AlgoState state;
  LinearFit fit;
  double final_rel_gap = 0.0;  // |U_final - U*| / |U*|
  int settle_iter = 0;
};

struct ConvergenceStudy {
  OracleResult oracle;
  std::vector<ConvergenceRun> runs;
};

ConvergenceStudy convergence_study(const Scenario& s, const Utilities& utils,
                                   const std::vector<double>& gammas,
                                   const AlgoParams& base = {});

}  // namespace fdpc
