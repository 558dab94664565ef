#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fdpc/feedback.hpp"
#include "fdpc/knowledge.hpp"
#include "fdpc/model.hpp"
#include "fdpc/onehop.hpp"
#include "fdpc/presets.hpp"
#include "fdpc/random_scenario.hpp"

namespace fdpc {
namespace {

Scenario single_pair(double g_dl, double g_inter) {
  Scenario s;
  s.antennas = 128.0;
  s.g_ul = {1e-6};
  s.g_dl = {g_dl};
  s.g_inter = GainMatrix(1, 1, g_inter);
  s.noise = 1e-3;
  s.nbr = build_neighborhoods(s.g_inter, 0.0);
  return s;
}

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

TEST(Feedback, MakeFeedback) {
  const Scenario s = single_pair(2.512e-6, 1e-6);
  const FeedbackMsg m = make_feedback(0, 2.0, 2e-3, s);
  EXPECT_DOUBLE_EQ(m.fb, 1000.0);
  EXPECT_EQ(m.pilot_gain_to_bs, 2.512e-6);
  ASSERT_EQ(m.pilot_gain_to_ul.size(), 1u);
  EXPECT_EQ(m.pilot_gain_to_ul[0].second, 1e-6);
  const FeedbackMsg floor = make_feedback(0, 1e-8, s.noise, s);
  EXPECT_DOUBLE_EQ(floor.fb, 1e-8 / s.noise);
  EXPECT_THROW(make_feedback(0, 0.0, 2e-3, s), std::invalid_argument);
  EXPECT_THROW(make_feedback(0, 1.0, 0.5e-3, s), std::invalid_argument);
  EXPECT_THROW(make_feedback(1, 1.0, 2e-3, s), std::exception);
}

TEST(Feedback, RecoverSinrHandValue) {
  const Scenario s = single_pair(2.512e-6, 1e-6);
  const FeedbackMsg m = make_feedback(0, 2.0, 2e-3, s);
  // 1000 * 128 * 1 * 2.512e-6 / 2.
  EXPECT_NEAR(bs_recover_sinr(m, 1.0, 2.0, 128.0), 0.160768, 1e-12);
  EXPECT_DOUBLE_EQ(bs_recover_sinr(m, 0.0, 2.0, 128.0), 0.0);
}

TEST(Feedback, RecoverSinrMatchesModel) {
  LossModel loss;
  loss.inter_mean = 1e-10;
  const Scenario s = random_scenario(4, 3, 5, 64, loss);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int k = 0; k < 100; ++k) {
    std::vector<double> p_ul = {u(rng) * s.p_ul_max, u(rng) * s.p_ul_max, u(rng) * s.p_ul_max};
    const std::size_t j = static_cast<std::size_t>(k % 5);
    const double q = u(rng) * 10.0;
    const double in = interference_plus_noise(s, p_ul, j);
    const FeedbackMsg m = make_feedback(j, q, in, s);
    // fb = q / IN written two ways.
    EXPECT_TRUE(close_rel(m.fb * in, q, 1e-12));
    const double p_dl = u(rng) * 5.0;
    EXPECT_TRUE(close_rel(bs_recover_sinr(m, p_dl, q, s.antennas), downlink_sinr(s, p_dl, p_ul, j), 1e-12));
  }
}

TEST(Feedback, OverheardMetric) {
  const Scenario s = single_pair(2.512e-6, 1e-6);
  const FeedbackMsg m = make_feedback(0, 2.0, 2e-3, s);
  const OverheardMetric o = ul_overhear_metric(m, 0, 0.2);
  EXPECT_DOUBLE_EQ(o.m, 1e-3);
  EXPECT_DOUBLE_EQ(o.weighted_term, 2e-4);
  EXPECT_NEAR(o.weighted_term, 2.0 * 1e-6 * 0.2 / 2e-3, 1e-18);
  EXPECT_THROW(ul_overhear_metric(m, 3, 0.2), std::invalid_argument);

  const Scenario quiet = single_pair(2.512e-6, 0.0);
  const OverheardMetric z = ul_overhear_metric(make_feedback(0, 2.0, 2e-3, quiet), 0, 0.2);
  EXPECT_EQ(z.m, 0.0);
  EXPECT_EQ(z.weighted_term, 0.0);
}

TEST(Feedback, WireRoundTrip) {
  FeedbackMsg m;
  m.sender = 7;
  m.fb = 1234.5678e-3;
  m.pilot_gain_to_bs = 3e-6;
  m.pilot_gain_to_ul = {{0, 1e-9}, {4, 2.5e-10}, {9, -0.0}};
  const auto bytes = encode(m);
  EXPECT_EQ(bytes.size(), 4u + 8u + 4u + 3u * 12u);
  // Little-endian sender first.
  EXPECT_EQ(bytes[0], 7);
  EXPECT_EQ(bytes[1], 0);
  EXPECT_EQ(decode(bytes, 3e-6), m);
  std::vector<std::uint8_t> cut(bytes.begin(), bytes.end() - 1);
  EXPECT_THROW(decode(cut), std::invalid_argument);
  std::vector<std::uint8_t> extra = bytes;
  extra.push_back(0);
  EXPECT_THROW(decode(extra), std::invalid_argument);
}

TEST(Feedback, WireBytesOfFb) {
  FeedbackMsg m;
  m.sender = 1;
  m.fb = 1.0;  // 0x3FF0000000000000
  const auto b = encode(m);
  ASSERT_EQ(b.size(), 16u);
  const std::vector<std::uint8_t> expect = {1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0xF0, 0x3F, 0, 0, 0, 0};
  EXPECT_EQ(b, expect);
}

TEST(Knowledge, PermissionsFollowOneHop) {
  const Scenario s = preset("fig3-pf").scenario();  // uplink 0 hears downlink 0 and 1
  KnowledgeTable bs(Role::bs(), s);
  EXPECT_TRUE(bs.permits({FactKind::dl_sinr, FactRef::npos, 2}));
  EXPECT_TRUE(bs.permits({FactKind::dl_budget}));
  EXPECT_FALSE(bs.permits({FactKind::inter_gain, 0, 0}));
  EXPECT_FALSE(bs.permits({FactKind::metric, 0, 0}));

  KnowledgeTable ul(Role::uplink(0), s);
  EXPECT_TRUE(ul.permits({FactKind::ul_power, 0}));
  EXPECT_TRUE(ul.permits({FactKind::metric, 0, 1}));
  EXPECT_TRUE(ul.permits({FactKind::inter_gain, 0, 0}));
  EXPECT_FALSE(ul.permits({FactKind::metric, 0, 2}));
  EXPECT_FALSE(ul.permits({FactKind::metric, 1, 0}));
  EXPECT_FALSE(ul.permits({FactKind::ul_price, 1}));
  EXPECT_FALSE(ul.permits({FactKind::interference, FactRef::npos, 0}));

  KnowledgeTable dl(Role::downlink(3), s);
  EXPECT_TRUE(dl.permits({FactKind::interference, FactRef::npos, 3}));
  EXPECT_TRUE(dl.permits({FactKind::dl_price, FactRef::npos, 3}));
  EXPECT_FALSE(dl.permits({FactKind::dl_price, FactRef::npos, 2}));
  EXPECT_FALSE(dl.permits({FactKind::ul_power, 0}));
}

TEST(Knowledge, ReadsAreRecordedAndChecked) {
  const Scenario s = preset("fig3-pf").scenario();
  KnowledgeTable ul(Role::uplink(1), s);
  ul.read({FactKind::ul_price, 1});
  EXPECT_EQ(ul.read_set().size(), 1u);
  try {
    ul.read({FactKind::metric, 0, 0});
    FAIL() << "expected AccessViolation";
  } catch (const AccessViolation& v) {
    EXPECT_EQ(v.agent(), Role::uplink(1));
    EXPECT_EQ(v.fact().kind, FactKind::metric);
  }
}

TEST(OneHop, GuardedRunMatchesDirectRun) {
  for (const std::string& name : preset_names()) {
    const Preset pr = preset(name);
    ScenarioParams p = pr.params;
    if (name.rfind("fig2", 0) == 0) p.g_inter(0, 0) = 1e-9;
    const Scenario s = make_scenario(p);
    AlgoParams params;
    params.max_iters = 600;
    const AlgoState direct = run(s, pr.utilities(), params);
    const GuardedRun guarded = run_guarded(s, pr.utilities(), params);
    ASSERT_EQ(direct.trace.size(), guarded.state.trace.size()) << name;
    EXPECT_EQ(direct.status, guarded.state.status);
    EXPECT_EQ(guarded.stats.violations, 0u);
    for (std::size_t k = 0; k < direct.trace.size(); ++k) {
      const TraceRow& a = direct.trace[k];
      const TraceRow& b = guarded.state.trace[k];
      EXPECT_TRUE(close_rel(a.sum_utility, b.sum_utility, 1e-12)) << name << " " << k;
      for (std::size_t i = 0; i < a.p_ul.size(); ++i) {
        EXPECT_TRUE(close_rel(a.p_ul[i], b.p_ul[i], 1e-12));
        EXPECT_TRUE(close_rel(a.q_ul[i], b.q_ul[i], 1e-12));
      }
      for (std::size_t j = 0; j < a.p_dl.size(); ++j) {
        EXPECT_TRUE(close_rel(a.p_dl[j], b.p_dl[j], 1e-12));
        EXPECT_TRUE(close_rel(a.q_dl[j], b.q_dl[j], 1e-12));
      }
    }
    for (std::size_t n : guarded.stats.messages_per_round) EXPECT_EQ(n, s.num_dl());
    for (std::size_t n : guarded.stats.payload_scalars_per_round) EXPECT_EQ(n, s.num_dl());
  }
}

TEST(OneHop, PayloadIndependentOfUplinkCount) {
  LossModel loss;
  loss.inter_mean = 1e-11;
  AlgoParams params;
  params.max_iters = 5;
  const Utilities u4 = Utilities::uniform(2, 4, UtilityFn::log(), UtilityFn::log());
  const Utilities u8 = Utilities::uniform(8, 4, UtilityFn::log(), UtilityFn::log());
  const GuardedRun small = run_guarded(random_scenario(2, 2, 4, 128, loss), u4, params);
  const GuardedRun big = run_guarded(random_scenario(2, 8, 4, 512, loss), u8, params);
  EXPECT_EQ(small.stats.payload_scalars_per_round, big.stats.payload_scalars_per_round);
}

TEST(OneHop, TwoHopProbeIsCaught) {
  const Preset pr = preset("fig3-pf");
  AlgoParams params;
  params.max_iters = 5;
  GuardOptions opts;
  opts.two_hop_probe = std::make_pair(std::size_t{0}, std::size_t{1});
  EXPECT_THROW(run_guarded(pr.scenario(), pr.utilities(), params, nullptr, opts), AccessViolation);
}

TEST(OneHop, AgentsOnlyReadOwnFacts) {
  const Preset pr = preset("fig3-pf");
  const Scenario s = pr.scenario();
  AlgoParams params;
  params.max_iters = 5;
  const GuardedRun g = run_guarded(s, pr.utilities(), params);
  for (const auto& [role, facts] : g.stats.read_sets) {
    KnowledgeTable table(role, s);
    for (const FactRef& f : facts) EXPECT_TRUE(table.permits(f)) << to_string(role) << " " << to_string(f);
  }
  EXPECT_FALSE(g.stats.read_sets.at(Role::uplink(0)).empty());
}

TEST(Overhead, CompleteNeighborhoods) {
  Scenario s;
  s.g_inter = GainMatrix(15, 20, 1e-9);
  s.nbr = build_neighborhoods(s.g_inter, 0.0);
  const Overhead o = overhead_accounting(s.nbr);
  EXPECT_EQ(o.centralized_interference_items, 300u);
  EXPECT_EQ(o.centralized_link_items, 35u);
  EXPECT_EQ(o.centralized_items, 335u);
  EXPECT_EQ(o.onehop_bs_items_per_round, 20u);
  for (std::size_t n : o.onehop_ul_items) EXPECT_EQ(n, 20u);
}

TEST(Overhead, EmptyNeighborhoods) {
  const Overhead o = overhead_accounting(build_neighborhoods(GainMatrix(15, 20, 1e-9), 1.0));
  EXPECT_EQ(o.centralized_interference_items, 0u);
  EXPECT_EQ(o.centralized_link_items, 35u);
}

}  // namespace
}  // namespace fdpc
