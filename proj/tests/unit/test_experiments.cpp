#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "fdpc/experiments.hpp"
#include "fdpc/presets.hpp"
#include "fdpc/report.hpp"
#include "fdpc/units.hpp"

namespace fdpc {
namespace {

TEST(Theta, Fractions) {
  const double pm = 0.2;
  EXPECT_EQ(theta_fraction(std::vector<double>{pm, pm, pm}, 0.5, pm), 0.0);
  EXPECT_EQ(theta_fraction(std::vector<double>{0.4 * pm, 0.4 * pm}, 0.5, pm), 1.0);
  EXPECT_EQ(theta_fraction(std::vector<double>{0.1 * pm, 0.9 * pm}, 0.5, pm), 0.5);
  EXPECT_THROW(theta_fraction(std::vector<double>{pm}, 1.0, pm), std::invalid_argument);
  EXPECT_THROW(theta_fraction(std::vector<double>{pm}, 0.0, pm), std::invalid_argument);
  EXPECT_EQ(psi_fraction(std::vector<double>{1.0, 4.0, 5.0}, 0.5, 12.0), 1.0 / 3.0);
}

TEST(Sequence, DoublingSizes) {
  const ScenarioSequence seq = ScenarioSequence::doubling(16.0, 3);
  ASSERT_EQ(seq.levels.size(), 3u);
  const std::size_t ul[] = {2, 4, 8};
  const double m[] = {128, 512, 2048};
  for (std::size_t l = 0; l < 3; ++l) {
    EXPECT_EQ(seq.levels[l].num_ul, ul[l]);
    EXPECT_EQ(seq.levels[l].num_dl, 2 * ul[l]);
    EXPECT_EQ(seq.levels[l].antennas, m[l]);
  }
  EXPECT_NO_THROW(seq.validate());
}

TEST(Sequence, LevelsAreBitwisePrefixes) {
  const ScenarioSequence seq = ScenarioSequence::doubling(16.0, 3, 2, 0.5, 9, scaling_loss_model());
  for (std::size_t l = 0; l + 1 < 3; ++l) {
    const Scenario a = seq.scenario(l);
    const Scenario b = seq.scenario(l + 1);
    for (std::size_t i = 0; i < a.num_ul(); ++i) {
      EXPECT_EQ(a.g_ul[i], b.g_ul[i]);
      for (std::size_t j = 0; j < a.num_dl(); ++j) EXPECT_EQ(a.g_inter(i, j), b.g_inter(i, j));
    }
    for (std::size_t j = 0; j < a.num_dl(); ++j) EXPECT_EQ(a.g_dl[j], b.g_dl[j]);
  }
}

TEST(Scaling, InterferenceFreeKeepsFullPower) {
  LossModel loss = scaling_loss_model();
  loss.inter_mean = 0.0;
  const ScenarioSequence seq = ScenarioSequence::doubling(16.0, 3, 2, 0.5, 1, loss);
  const ScalingReport r = run_scaling(seq, UtilityFn::log(), UtilityFn::log(), {0.25, 0.5, 0.99});
  for (const LevelReport& l : r.levels) {
    for (double t : l.theta) EXPECT_EQ(t, 0.0);
    EXPECT_TRUE(l.converged);
    EXPECT_NEAR(l.utility_opt, l.utility_naive, 1e-9 * std::abs(l.utility_opt));
  }
}

TEST(Scaling, ThetaMonotoneInRhoAndTableShape) {
  const ScenarioSequence seq = ScenarioSequence::doubling(16.0, 3, 2, 0.5, 2, scaling_loss_model());
  const ScalingReport r = run_scaling(seq, UtilityFn::log(), UtilityFn::log());
  for (const LevelReport& l : r.levels) {
    EXPECT_LE(l.theta[0], l.theta[1]);
    EXPECT_LE(l.theta[1], l.theta[2]);
    EXPECT_GE(l.utility_opt, l.utility_naive - 1e-9 * std::abs(l.utility_naive));
  }
  const CsvTable t = r.table();
  EXPECT_EQ(t.header.front(), "level");
  EXPECT_EQ(t.rows.size(), 3u);
  EXPECT_EQ(t.column("M"), (std::vector<double>{128, 512, 2048}));
}

TEST(Sweep, ShapeOfTheInterferenceSweep) {
  const Preset pr = preset("fig2-pf");
  const std::vector<double> g = linspace(-140.0, -60.0, 9);
  const auto pts = sweep_interference(pr.params, g, pr.utilities());
  ASSERT_EQ(pts.size(), 9u);
  EXPECT_DOUBLE_EQ(pts.front().p_ul_star, pr.params.p_ul_max);
  EXPECT_NEAR(pts.front().gap, 0.0, 1e-9);
  for (std::size_t k = 1; k < pts.size(); ++k) {
    EXPECT_LE(pts[k].p_ul_star, pts[k - 1].p_ul_star + 1e-12);
    EXPECT_GE(pts[k].gap, pts[k - 1].gap - 1e-12);
  }
  EXPECT_LT(pts.back().p_ul_star, 0.01 * pr.params.p_ul_max);
  const CsvTable t = sweep_table(pts);
  EXPECT_EQ(t.header.size(), 8u);
  EXPECT_THROW(sweep_interference(preset("fig3-pf").params, g, pr.utilities()), std::invalid_argument);
}

TEST(Fits, LogLinear) {
  std::vector<TraceRow> trace(300);
  for (int k = 0; k < 300; ++k) {
    trace[k].iter = k;
    trace[k].eps = 3.0 * std::exp(-0.1 * k);
  }
  const LinearFit f = fit_log_linear(trace, 20, 200);
  EXPECT_NEAR(f.slope, -0.1, 1e-12);
  EXPECT_NEAR(f.intercept, std::log(3.0), 1e-9);
  EXPECT_NEAR(f.r2, 1.0, 1e-12);
  EXPECT_EQ(f.n, 181u);
}

TEST(Fits, SettleIteration) {
  std::vector<TraceRow> trace(100);
  for (int k = 0; k < 100; ++k) {
    trace[k].iter = k;
    trace[k].sum_utility = k < 40 ? 0.0 : 10.0;
  }
  EXPECT_EQ(settle_iteration(trace, 1e-2), 40);
}

TEST(Linspace, Endpoints) {
  const auto v = linspace(-140.0, -60.0, 30);
  ASSERT_EQ(v.size(), 30u);
  EXPECT_EQ(v.front(), -140.0);
  EXPECT_EQ(v.back(), -60.0);
}

TEST(Report, FormatAndCsv) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(std::nan("")), "nan");
  EXPECT_EQ(format_double(-INFINITY), "-inf");
  CsvTable t{{"a", "b"}, {{1.0, 2.5}, {3.0, -1.0}}};
  std::ostringstream os;
  t.write(os);
  EXPECT_EQ(os.str(), "a,b\n1,2.5\n3,-1\n");
  EXPECT_EQ(t.column("b"), (std::vector<double>{2.5, -1.0}));
  EXPECT_THROW(t.column("c"), std::out_of_range);
}

TEST(Report, Svg) {
  SvgPlot p{"t", "x", "y", true, {{"s", {1, 2, 3}, {1, 0, 10}}}};
  std::ostringstream os;
  write_svg(os, p);
  const std::string svg = os.str();
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
}

TEST(Presets, Names) {
  for (const auto& n : preset_names()) EXPECT_EQ(preset(n).name, n);
  EXPECT_THROW(preset("fig9"), std::invalid_argument);
  const ScenarioParams p = preset("fig3-pf").params;
  EXPECT_NEAR(p.noise, dbm_to_watts(-90.0), 1e-25);
  EXPECT_NEAR(p.p_ul_max, dbm_to_watts(23.0), 1e-15);
  EXPECT_NEAR(p.p_dl_total, dbm_to_watts(45.0), 1e-12);
}

}  // namespace
}  // namespace fdpc
