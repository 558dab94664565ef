#include <gtest/gtest.h>

#include <cmath>

#include "fdpc/model.hpp"
#include "fdpc/objective.hpp"
#include "fdpc/oracle.hpp"
#include "fdpc/presets.hpp"
#include "fdpc/random_scenario.hpp"
#include "fdpc/units.hpp"
#include "fdpc/validation.hpp"

namespace fdpc {
namespace {

ScenarioParams one_by_one(double g_inter_db) {
  ScenarioParams p = preset("fig2-pf").params;
  p.g_inter(0, 0) = g_inter_db > -500.0 ? db_to_linear(g_inter_db) : 0.0;
  return p;
}

TEST(Oracle, DecoupledCellUsesFullPower) {
  const Scenario s = make_scenario(one_by_one(-1000.0));
  const OracleResult r = solve_centralized(s, preset("fig2-pf").utilities());
  ASSERT_TRUE(r.converged) << r.status;
  EXPECT_NEAR(r.p_star.p_ul[0], s.p_ul_max, 1e-12 * s.p_ul_max);
  EXPECT_NEAR(r.p_star.p_dl[0], s.p_dl_total, 1e-12 * s.p_dl_total);
  EXPECT_LE(r.kkt.max, 1e-6);
}

TEST(Oracle, WeakInterferenceKeepsUplinkAtMax) {
  const Scenario s = make_scenario(one_by_one(-130.0));
  const OracleResult r = solve_centralized(s, preset("fig2-pf").utilities());
  EXPECT_NEAR(r.p_star.p_ul[0], s.p_ul_max, 1e-9 * s.p_ul_max);
}

TEST(Oracle, StrongInterferenceClosedForm) {
  // The downlink sits at P_tot; the uplink power solves the scalar condition
  // 1 / r_u = (2 / r_d) g P / (g P + N0), found here by bisection on log P.
  const double g = db_to_linear(-80.0);
  const Scenario s = make_scenario(one_by_one(-80.0));
  const OracleResult r = solve_centralized(s, preset("fig2-pf").utilities());
  auto stationarity = [&](double x) {
    const double p = std::exp(x);
    const double in = g * p + s.noise;
    const double r_u = std::log(s.antennas * p * s.g_ul[0] / s.noise);
    const double r_d = std::log(s.antennas * s.p_dl_total * s.g_dl[0] / in);
    return 1.0 / r_u - (2.0 / r_d) * g * p / in;
  };
  double lo = std::log(s.p0_ul[0]), hi = std::log(s.p_ul_max);
  ASSERT_GT(stationarity(lo), 0.0);
  ASSERT_LT(stationarity(hi), 0.0);
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (lo + hi);
    (stationarity(m) > 0.0 ? lo : hi) = m;
  }
  const double expected = std::exp(0.5 * (lo + hi));
  EXPECT_NEAR(r.p_star.p_ul[0], expected, 1e-6 * expected);
  EXPECT_NEAR(r.p_star.p_dl[0], s.p_dl_total, 1e-12 * s.p_dl_total);
}

TEST(Oracle, CertificatesOnFig3) {
  for (const char* name : {"fig3-pf", "fig3-mpd"}) {
    const Preset pr = preset(name);
    const Scenario s = pr.scenario();
    const OracleResult r = solve_centralized(s, pr.utilities());
    ASSERT_TRUE(r.converged) << name << " " << r.status;
    EXPECT_LE(r.grad_norm, 1e-8);
    EXPECT_LE(r.kkt.max, 1e-6) << name;
    EXPECT_LE(std::abs(r.duality_gap), 1e-6 * std::max(1.0, std::abs(r.utility_star))) << name;
    EXPECT_TRUE(r.budget_binding);
    EXPECT_TRUE(is_feasible(s, r.p_star));
    const double again = sum_utility(s, pr.utilities(), r.p_star, RateMode::high_snr);
    EXPECT_NEAR(again, r.utility_star, 1e-12 * std::abs(again));
  }
}

TEST(Oracle, DualValueBoundsEveryFeasiblePoint) {
  const Preset pr = preset("fig3-mpd");
  const Scenario s = pr.scenario();
  const Utilities u = pr.utilities();
  const OracleResult r = solve_centralized(s, u);
  // Weak duality at arbitrary prices.
  for (std::uint64_t d = 0; d < 10; ++d) {
    const PowerAllocation p = random_feasible_point(s, 8, d);
    const Prices q = marginal_prices(s, u, p);
    const double bound = dual_value(s, u, q);
    EXPECT_GE(bound + 1e-9, r.utility_star);
  }
}

TEST(Oracle, KktResidualFlagsNonOptimalPoint) {
  const Scenario s = make_scenario(one_by_one(-70.0));
  const Utilities u = preset("fig2-pf").utilities();
  const KktResidual k = kkt_residual(s, u, PowerAllocation{{s.p_ul_max}, {s.p_dl_total}});
  EXPECT_GT(k.max, 1e-3);
}

TEST(Oracle, AgreesWithFineGridOn1x1) {
  for (double gdb : {-120.0, -100.0, -80.0, -60.0}) {
    const Scenario s = make_scenario(one_by_one(gdb));
    const Utilities u = preset("fig2-mpd").utilities();
    const OracleResult r = solve_centralized(s, u);
    const GridResult g = brute_force_grid(s, u, 10000);
    EXPECT_GE(r.utility_star, g.utility - g.resolution_bound) << gdb;
    EXPECT_NEAR(r.utility_star, g.utility, 1e-3) << gdb;
  }
}

TEST(Oracle, GridDecoupledCorner) {
  const Scenario s = make_scenario(one_by_one(-1000.0));
  const GridResult g = brute_force_grid(s, preset("fig2-pf").utilities(), 50);
  EXPECT_DOUBLE_EQ(g.best.p_ul[0], s.p_ul_max);
  EXPECT_DOUBLE_EQ(g.best.p_dl[0], s.p_dl_total);
}

TEST(Oracle, GridOn2x2) {
  LossModel loss;
  loss.inter_mean = 1e-10;
  const Scenario s = random_scenario(21, 2, 2, 64, loss);
  const Utilities u = Utilities::uniform(2, 2, UtilityFn::log(), UtilityFn::log());
  const OracleResult r = solve_centralized(s, u);
  const GridResult g = brute_force_grid(s, u, 30);
  EXPECT_GE(r.utility_star, g.utility - g.resolution_bound);
  EXPECT_LE(r.utility_star - g.utility, 10.0 * g.resolution_bound + 1e-9);
  EXPECT_THROW(brute_force_grid(random_scenario(1, 3, 3, 64, loss), u, 5), std::invalid_argument);
}

TEST(Oracle, NaiveBaselinePinsUplink) {
  const Scenario s = make_scenario(one_by_one(-70.0));
  const Utilities u = preset("fig2-pf").utilities();
  OracleOptions o;
  o.fix_uplink_at_max = true;
  const OracleResult naive = solve_centralized(s, u, o);
  const OracleResult best = solve_centralized(s, u);
  EXPECT_DOUBLE_EQ(naive.p_star.p_ul[0], s.p_ul_max);
  EXPECT_GT(best.utility_star, naive.utility_star);
}

TEST(Oracle, PermutationEquivariance) {
  const Preset pr = preset("fig3-pf");
  ScenarioParams p = pr.params;
  ScenarioParams q = p;
  std::swap(q.g_ul[0], q.g_ul[1]);
  std::swap(q.g_dl[0], q.g_dl[3]);
  for (std::size_t j = 0; j < 4; ++j) {
    const std::size_t pj = j == 0 ? 3 : j == 3 ? 0 : j;
    q.g_inter(0, pj) = p.g_inter(1, j);
    q.g_inter(1, pj) = p.g_inter(0, j);
  }
  const OracleResult a = solve_centralized(make_scenario(p), pr.utilities());
  const OracleResult b = solve_centralized(make_scenario(q), pr.utilities());
  EXPECT_NEAR(a.utility_star, b.utility_star, 1e-9);
  EXPECT_NEAR(a.p_star.p_ul[0], b.p_star.p_ul[1], 1e-7 * a.p_star.p_ul[0]);
  EXPECT_NEAR(a.p_star.p_dl[0], b.p_star.p_dl[3], 1e-7 * a.p_star.p_dl[0]);
}

TEST(Oracle, UplinkPowerNonincreasingInInterference) {
  double prev = 1e300;
  for (double gdb = -130.0; gdb <= -60.0; gdb += 5.0) {
    const OracleResult r = solve_centralized(make_scenario(one_by_one(gdb)), preset("fig2-pf").utilities());
    EXPECT_LE(r.p_star.p_ul[0], prev * (1 + 1e-9)) << gdb;
    prev = r.p_star.p_ul[0];
  }
}

}  // namespace
}  // namespace fdpc
