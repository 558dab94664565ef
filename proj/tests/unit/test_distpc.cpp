#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>
#include <algorithm>

#include "fdpc/distpc.hpp"
#include "fdpc/experiments.hpp"
#include "fdpc/model.hpp"
#include "fdpc/oracle.hpp"
#include "fdpc/presets.hpp"
#include "fdpc/units.hpp"

namespace fdpc {
namespace {

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

// Log-domain budget projection by nested bisection: x_j solves
// x + mu e^x = y_j (clamped at the floor), mu chosen so the powers sum to B.
std::vector<double> project_by_bisection(const std::vector<double>& y, const std::vector<double>& lo,
                                         double budget) {
  auto x_of = [&](double mu, std::size_t j) {
    double a = lo[j], b = y[j];
    if (a >= b) return a;
    if (a + mu * std::exp(a) >= y[j]) return a;
    for (int it = 0; it < 200; ++it) {
      const double m = 0.5 * (a + b);
      (m + mu * std::exp(m) > y[j] ? b : a) = m;
    }
    return 0.5 * (a + b);
  };
  auto total = [&](double mu) {
    double t = 0.0;
    for (std::size_t j = 0; j < y.size(); ++j) t += std::exp(x_of(mu, j));
    return t;
  };
  double lmu_lo = -60.0, lmu_hi = 60.0;
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (lmu_lo + lmu_hi);
    (total(std::exp(m)) > budget ? lmu_lo : lmu_hi) = m;
  }
  std::vector<double> x(y.size());
  for (std::size_t j = 0; j < y.size(); ++j) x[j] = x_of(std::exp(0.5 * (lmu_lo + lmu_hi)), j);
  return x;
}

TEST(Distpc, InitSplitsBudget) {
  const Scenario s = preset("fig3-pf").scenario();
  const AlgoParams params;
  const AlgoState st = init(s, params);
  const PowerAllocation p = st.powers();
  ASSERT_NEAR(s.p_dl_total, 31.62, 0.01);
  for (double v : p.p_dl) EXPECT_NEAR(v, 7.905, 1e-3);
  EXPECT_NEAR(sum(p.p_dl), s.p_dl_total, 1e-12 * s.p_dl_total);
  for (double v : p.p_ul) EXPECT_DOUBLE_EQ(v, s.p_ul_max);
  for (double q : st.q_ul) EXPECT_EQ(q, params.q_min);
  for (double q : st.q_dl) EXPECT_EQ(q, params.q_min);
  EXPECT_EQ(st.t, 0);
}

TEST(Distpc, DownlinkStepWithFlooredPrices) {
  const Scenario s = preset("fig3-pf").scenario();
  const AlgoParams params;
  const AlgoState st = init(s, params);
  const std::vector<double> next = dl_power_step(st, s, params);
  for (std::size_t j = 0; j < next.size(); ++j) {
    EXPECT_LT(std::abs(std::exp(next[j]) - std::exp(st.p_hat_dl[j])), 1e-9);
  }
}

TEST(Distpc, DownlinkStepMatchesHandProjection) {
  const Scenario s = preset("fig3-pf").scenario();
  AlgoParams params;
  params.gamma = 0.1;
  AlgoState st = init(s, params);
  st.q_dl = {1.0, 0.0, 0.0, 0.0};
  const std::vector<double> next = dl_power_step(st, s, params);
  std::vector<double> y = st.p_hat_dl;
  y[0] += 0.1;
  std::vector<double> lo(4);
  for (std::size_t j = 0; j < 4; ++j) lo[j] = std::log(s.p0_dl[j]);
  const std::vector<double> ref = project_by_bisection(y, lo, s.p_dl_total);
  double total = 0.0;
  for (std::size_t j = 0; j < 4; ++j) {
    EXPECT_NEAR(next[j], ref[j], 1e-10) << j;
    total += std::exp(next[j]);
  }
  EXPECT_NEAR(total, s.p_dl_total, 1e-12 * s.p_dl_total);
  EXPECT_GT(next[0], st.p_hat_dl[0]);
  for (std::size_t j = 1; j < 4; ++j) EXPECT_LT(next[j], st.p_hat_dl[j]);
}

TEST(Distpc, SingleDownlinkUserPinnedAtBudget) {
  const Preset pr = preset("fig2-pf");
  ScenarioParams p = pr.params;
  p.g_inter(0, 0) = db_to_linear(-90.0);
  const Scenario s = make_scenario(p);
  AlgoParams params;
  params.max_iters = 200;
  const AlgoState st = run(s, pr.utilities(), params);
  for (const TraceRow& r : st.trace) EXPECT_NEAR(r.p_dl[0], s.p_dl_total, 1e-12 * s.p_dl_total);
}

TEST(Distpc, UplinkUpdateHandValue) {
  const double p_hat = std::log(0.3);
  const double next = ul_power_update(p_hat, 1.0, {5.0 * 0.3}, -20.0, 0.0, 0.1);
  EXPECT_NEAR(next - p_hat, -0.05, 1e-15);
  // Zero gradient leaves the power alone.
  EXPECT_EQ(ul_power_update(p_hat, 1.5, {1.5}, -20.0, 0.0, 0.1), p_hat);
  // Pure ascent is clipped at the top.
  EXPECT_EQ(ul_power_update(-0.01, 1.0, {}, -20.0, 0.0, 0.1), 0.0);
}

TEST(Distpc, UplinkWithoutNeighborsRisesToMax) {
  const Preset pr = preset("fig2-pf");
  const Scenario s = pr.scenario();  // interference-free
  AlgoParams params;
  AlgoState st = init(s, params);
  st.p_hat_ul[0] = std::log(s.p0_ul[0]);
  st.q_ul[0] = 1.0;
  const auto m = direct_metrics(st, s);
  double prev = st.p_hat_ul[0];
  for (int k = 0; k < 1000; ++k) {
    st.p_hat_ul = ul_power_step(st, s, params, m);
    EXPECT_GE(st.p_hat_ul[0], prev);
    prev = st.p_hat_ul[0];
  }
  EXPECT_DOUBLE_EQ(st.p_hat_ul[0], std::log(s.p_ul_max));
}

TEST(Distpc, UplinkStepNeedsEveryMetric) {
  const Scenario s = preset("fig3-pf").scenario();
  const AlgoParams params;
  const AlgoState st = init(s, params);
  auto m = direct_metrics(st, s);
  ASSERT_FALSE(m[0].empty());
  m[0].pop_back();
  EXPECT_THROW(ul_power_step(st, s, params, m), std::invalid_argument);
}

TEST(Distpc, DirectMetricsDefinition) {
  const Scenario s = preset("fig3-pf").scenario();
  AlgoState st = init(s, AlgoParams{});
  st.q_dl = {0.3, 0.7, 1.1, 2.0};
  for (std::size_t j = 0; j < 4; ++j) st.in_dl[j] = interference_plus_noise(s, st.powers().p_ul, j);
  const auto m = direct_metrics(st, s);
  for (std::size_t i = 0; i < 2; ++i) {
    ASSERT_EQ(m[i].size(), s.nbr.of_ul[i].size());
    for (std::size_t k = 0; k < m[i].size(); ++k) {
      const std::size_t j = s.nbr.of_ul[i][k];
      EXPECT_NEAR(m[i][k], st.q_dl[j] * s.g_inter(i, j) / st.in_dl[j], 1e-15 * m[i][k]);
    }
  }
}

TEST(Distpc, PriceUpdateHandValues) {
  AlgoParams params;
  params.gamma = 0.01;
  const UtilityFn u = UtilityFn::log(1.5);  // (U')^-1(0.5) = 3
  const PriceUpdate a = price_update(u, 0.5, std::exp(2.0), params);
  EXPECT_NEAR(a.q, 0.51, 1e-15);
  EXPECT_NEAR(a.target_rate, 3.0, 1e-15);
  const PriceUpdate b = price_update(u, 0.5, std::exp(3.0), params);
  EXPECT_NEAR(b.q, 0.5, 1e-15);
  params.gamma = 1.0;
  const PriceUpdate c = price_update(u, 0.5, std::exp(40.0), params);
  EXPECT_EQ(c.q, params.q_min);
}

TEST(Distpc, PriceUpdateCapsTargetRate) {
  AlgoParams params;
  const PriceUpdate p = price_update(UtilityFn::log(), params.q_min, 1e3, params);
  EXPECT_EQ(p.target_rate, params.r_max);
}

TEST(Distpc, ParamsValidation) {
  AlgoParams p;
  EXPECT_NO_THROW(p.validate());
  p.gamma = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = AlgoParams{};
  p.q_min = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = AlgoParams{};
  p.max_iters = 0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = AlgoParams{};
  p.price_scale = -1.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(Distpc, DecoupledCellConverges) {
  const Preset pr = preset("fig3-pf");
  ScenarioParams p = pr.params;
  p.g_inter = GainMatrix(2, 4, 0.0);
  const Scenario s = make_scenario(p);
  const OracleResult o = solve_centralized(s, pr.utilities());
  const AlgoState st = run(s, pr.utilities(), AlgoParams{}, &o);
  ASSERT_EQ(st.status, RunStatus::converged) << st.note;
  const PowerAllocation fin = st.powers();
  for (double v : fin.p_ul) EXPECT_NEAR(v, s.p_ul_max, 1e-9);
  for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(fin.p_dl[j], o.p_star.p_dl[j], 1e-4 * o.p_star.p_dl[j]);
}

class Fig3 : public ::testing::TestWithParam<const char*> {};

TEST_P(Fig3, ReachesOracleAndStaysFeasible) {
  const Preset pr = preset(GetParam());
  const Scenario s = pr.scenario();
  const OracleResult o = solve_centralized(s, pr.utilities());
  const AlgoState st = run(s, pr.utilities(), AlgoParams{}, &o);
  ASSERT_EQ(st.status, RunStatus::converged) << st.note;
  EXPECT_GE(st.trace.size(), 200u);
  const double fin = st.trace.back().sum_utility;
  EXPECT_LE(std::abs(fin - o.utility_star), 1e-2 * std::abs(o.utility_star));
  EXPECT_LE(settle_iteration(st.trace), 500);
  for (const TraceRow& r : st.trace) {
    EXPECT_TRUE(is_feasible(s, PowerAllocation{r.p_ul, r.p_dl})) << r.iter;
    EXPECT_LE(r.sum_utility, o.utility_star + 1e-6 * std::abs(o.utility_star));
  }
  const LinearFit fit = fit_log_linear(st.trace, 20, 200);
  EXPECT_LT(fit.slope, 0.0);
  EXPECT_GE(fit.r2, 0.9);
}

TEST_P(Fig3, PriceScaleDoesNotMoveTheLimit) {
  const Preset pr = preset(GetParam());
  const Scenario s = pr.scenario();
  const OracleResult o = solve_centralized(s, pr.utilities());
  const AlgoState direct = run(s, pr.utilities(), AlgoParams{}, &o);
  const AlgoState scaled = run(s, pr.utilities().scaled(3.0), AlgoParams{});
  const PowerAllocation a = direct.powers();
  const PowerAllocation b = scaled.powers();
  for (std::size_t i = 0; i < a.p_ul.size(); ++i) EXPECT_NEAR(a.p_ul[i], b.p_ul[i], 1e-3 * a.p_ul[i]);
  for (std::size_t j = 0; j < a.p_dl.size(); ++j) EXPECT_NEAR(a.p_dl[j], b.p_dl[j], 1e-3 * a.p_dl[j]);
}

TEST_P(Fig3, LargeStepNeverReportsWrongConvergence) {
  const Preset pr = preset(GetParam());
  const Scenario s = pr.scenario();
  const OracleResult o = solve_centralized(s, pr.utilities());
  for (double gamma : {0.1, 0.2, 0.4, 0.8, 1.6}) {
    AlgoParams params;
    params.gamma = gamma;
    params.max_iters = 3000;
    const AlgoState st = run(s, pr.utilities(), params, &o);
    if (st.status == RunStatus::converged) {
      EXPECT_LE(std::abs(st.trace.back().sum_utility - o.utility_star), 1e-2 * std::abs(o.utility_star))
          << gamma;
    }
    if (st.status == RunStatus::unstable) EXPECT_FALSE(st.note.empty());
  }
}

INSTANTIATE_TEST_SUITE_P(Presets, Fig3, ::testing::Values("fig3-pf", "fig3-mpd"));

TEST(Distpc, NoisySinrStillFeasible) {
  const Preset pr = preset("fig3-pf");
  const Scenario s = pr.scenario();
  AlgoParams params;
  params.max_iters = 400;
  params.sinr_noise = [](LinkDir, std::size_t k, int t, double sinr) {
    return sinr * (1.0 + 0.01 * std::sin(1.0 + 7.0 * k + 3.0 * t));
  };
  const AlgoState st = run(s, pr.utilities(), params);
  for (const TraceRow& r : st.trace) EXPECT_TRUE(is_feasible(s, PowerAllocation{r.p_ul, r.p_dl}));
}

TEST(Distpc, TraceCsvHeader) {
  const Preset pr = preset("fig3-pf");
  AlgoParams params;
  params.max_iters = 3;
  const AlgoState st = run(pr.scenario(), pr.utilities(), params);
  std::ostringstream os;
  write_trace_csv(os, st);
  const std::string text = os.str();
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "iter,sum_utility,eps,p_ul_1,p_ul_2,p_dl_1,p_dl_2,p_dl_3,p_dl_4,q_ul_1,q_ul_2,q_dl_1,q_dl_2,"
            "q_dl_3,q_dl_4");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), static_cast<long>(st.trace.size() + 1));
}

}  // namespace
}  // namespace fdpc
