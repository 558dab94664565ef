#include "fdpc/validation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "fdpc/distpc.hpp"
#include "fdpc/experiments.hpp"
#include "fdpc/feedback.hpp"
#include "fdpc/model.hpp"
#include "fdpc/objective.hpp"
#include "fdpc/onehop.hpp"
#include "fdpc/oracle.hpp"
#include "fdpc/presets.hpp"
#include "fdpc/random_scenario.hpp"
#include "fdpc/report.hpp"

namespace fdpc {

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

PowerAllocation random_feasible_point(const Scenario& s, std::uint64_t seed, std::uint64_t draw) {
  constexpr std::uint64_t kStream = 0x7a11;
  PowerAllocation p;
  for (std::size_t i = 0; i < s.num_ul(); ++i) {
    const double lo = std::log(s.p0_ul[i]);
    const double hi = std::log(s.p_ul_max);
    p.p_ul.push_back(std::exp(lo + (hi - lo) * keyed_uniform(seed, kStream, draw, i)));
  }
  const double floor_sum = std::accumulate(s.p0_dl.begin(), s.p0_dl.end(), 0.0);
  const double total = floor_sum + (s.p_dl_total - floor_sum) *
                                        (0.05 + 0.95 * keyed_uniform(seed, kStream + 1, draw, 0));
  std::vector<double> w(s.num_dl());
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = 0.01 + keyed_uniform(seed, kStream + 2, draw, j);
  const double wsum = std::accumulate(w.begin(), w.end(), 0.0);
  for (std::size_t j = 0; j < w.size(); ++j) {
    p.p_dl.push_back(s.p0_dl[j] + (total - floor_sum) * w[j] / wsum);
  }
  return p;
}

namespace {

Check make(std::string name, bool ok, double value, double limit, std::string detail = {}) {
  return {std::move(name), ok, value, limit, std::move(detail)};
}

double max_rel_gradient_error(const Scenario& s, const Utilities& u, const LogPowers& x) {
  const ObjectiveEval e = evaluate_objective(s, u, x);
  std::vector<double> g(e.gradient.ul);
  g.insert(g.end(), e.gradient.dl.begin(), e.gradient.dl.end());
  double gmax = 0.0;
  for (double v : g) gmax = std::max(gmax, std::abs(v));
  constexpr double h = 1e-6;
  double worst = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    LogPowers a = x;
    LogPowers b = x;
    double& ca = k < s.num_ul() ? a.ul[k] : a.dl[k - s.num_ul()];
    double& cb = k < s.num_ul() ? b.ul[k] : b.dl[k - s.num_ul()];
    ca += h;
    cb -= h;
    const double fd = (objective_value(s, u, a) - objective_value(s, u, b)) / (2 * h);
    const double denom = std::max({std::abs(g[k]), std::abs(fd), 1e-3 * gmax});
    worst = std::max(worst, std::abs(g[k] - fd) / denom);
  }
  return worst;
}

Scenario permuted(const Scenario& s, const std::vector<std::size_t>& pu,
                  const std::vector<std::size_t>& pd) {
  ScenarioParams p;
  p.antennas = s.antennas;
  p.noise = s.noise;
  p.p_ul_max = s.p_ul_max;
  p.p_dl_total = s.p_dl_total;
  p.neighbor_threshold = 0.0;
  p.g_inter = GainMatrix(s.num_ul(), s.num_dl());
  for (std::size_t i = 0; i < s.num_ul(); ++i) p.g_ul.push_back(s.g_ul[pu[i]]);
  for (std::size_t j = 0; j < s.num_dl(); ++j) p.g_dl.push_back(s.g_dl[pd[j]]);
  for (std::size_t i = 0; i < s.num_ul(); ++i) {
    for (std::size_t j = 0; j < s.num_dl(); ++j) p.g_inter(i, j) = s.g_inter(pu[i], pd[j]);
  }
  Scenario out = make_scenario(p);
  // Keep the original neighbor sets and floors, relabelled.
  for (std::size_t i = 0; i < s.num_ul(); ++i) out.p0_ul[i] = s.p0_ul[pu[i]];
  for (std::size_t j = 0; j < s.num_dl(); ++j) out.p0_dl[j] = s.p0_dl[pd[j]];
  out.validate();
  return out;
}

double max_rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    worst = std::max(worst, std::abs(a[k] - b[k]) / std::max(std::abs(a[k]), std::abs(b[k])));
  }
  return worst;
}

std::string to_csv(const CsvTable& t) {
  std::ostringstream os;
  t.write(os);
  return os.str();
}

}  // namespace

ValidationReport run_validation(std::uint64_t seed) {
  ValidationReport rep;
  auto& checks = rep.checks;
  const LossModel loss;

  // Gradient against central differences, and midpoint concavity.
  {
    double worst = 0.0;
    double worst_concavity = 0.0;
    for (std::uint64_t k = 0; k < 5; ++k) {
      const std::size_t kul = 1 + (k * 3) % 8;
      const std::size_t kdl = 1 + (k * 5 + 2) % 8;
      const Scenario s = random_scenario(seed + k, kul, kdl, 16.0 * kul * kdl, loss);
      const Utilities u = Utilities::uniform(kul, kdl, UtilityFn::log(), UtilityFn::log(2.0));
      for (std::uint64_t d = 0; d < 10; ++d) {
        const LogPowers x = LogPowers::from(random_feasible_point(s, seed + k, d));
        worst = std::max(worst, max_rel_gradient_error(s, u, x));
        const LogPowers y = LogPowers::from(random_feasible_point(s, seed + k, 100 + d));
        LogPowers mid = x;
        for (std::size_t i = 0; i < kul; ++i) mid.ul[i] = 0.5 * (x.ul[i] + y.ul[i]);
        for (std::size_t j = 0; j < kdl; ++j) mid.dl[j] = 0.5 * (x.dl[j] + y.dl[j]);
        const double lhs = objective_value(s, u, mid);
        const double rhs = 0.5 * (objective_value(s, u, x) + objective_value(s, u, y));
        worst_concavity = std::max(worst_concavity, (rhs - lhs) / std::max(1.0, std::abs(rhs)));
      }
    }
    checks.push_back(make("gradient_matches_finite_differences", worst <= 1e-5, worst, 1e-5));
    checks.push_back(make("objective_midpoint_concave", worst_concavity <= 1e-12, worst_concavity, 1e-12));
  }

  // Oracle certificates on the six-user presets.
  for (const char* name : {"fig3-pf", "fig3-mpd"}) {
    const Preset pr = preset(name);
    const Scenario s = pr.scenario();
    const Utilities u = pr.utilities();
    const OracleResult o = solve_centralized(s, u);
    const std::string tag = std::string(name);
    checks.push_back(make("oracle_converged_" + tag, o.converged && o.grad_norm <= 1e-8, o.grad_norm, 1e-8, o.status));
    const double gap_limit = 1e-6 * std::abs(o.utility_star);
    checks.push_back(make("oracle_duality_gap_" + tag,
                          o.duality_gap >= -1e-9 && o.duality_gap <= gap_limit, o.duality_gap, gap_limit));
    checks.push_back(make("oracle_kkt_" + tag, o.kkt.max <= 1e-6, o.kkt.max, 1e-6));
    bool monotone = true;
    for (std::size_t k = 1; k < o.objective_trace.size(); ++k) {
      monotone = monotone && o.objective_trace[k] >= o.objective_trace[k - 1];
    }
    checks.push_back(make("oracle_monotone_" + tag, monotone, 0.0, 0.0));
    checks.push_back(make("oracle_budget_binds_" + tag, o.budget_binding, 0.0, 0.0));

    // Relabelled users give relabelled powers.
    const std::vector<std::size_t> pu = {1, 0};
    const std::vector<std::size_t> pd = {2, 0, 3, 1};
    const OracleResult op = solve_centralized(permuted(s, pu, pd), u);
    std::vector<double> a, b;
    for (std::size_t i = 0; i < 2; ++i) a.push_back(o.p_star.p_ul[pu[i]]), b.push_back(op.p_star.p_ul[i]);
    for (std::size_t j = 0; j < 4; ++j) a.push_back(o.p_star.p_dl[pd[j]]), b.push_back(op.p_star.p_dl[j]);
    const double perm = max_rel_diff(a, b);
    checks.push_back(make("oracle_permutation_equivariant_" + tag, perm <= 1e-6, perm, 1e-6));

    // Distributed loop.
    const AlgoParams params;
    const AlgoState st = run(s, u, params, &o);
    const double rel = std::abs(st.trace.back().sum_utility - o.utility_star) / std::abs(o.utility_star);
    checks.push_back(make("distpc_optimal_" + tag, st.status != RunStatus::unstable && rel <= 1e-2, rel, 1e-2,
                          to_string(st.status)));
    const AlgoState st3 = run(s, u.scaled(3.0), params);
    const PowerAllocation p1 = st.powers();
    const PowerAllocation p3 = st3.powers();
    std::vector<double> v1(p1.p_ul), v3(p3.p_ul);
    v1.insert(v1.end(), p1.p_dl.begin(), p1.p_dl.end());
    v3.insert(v3.end(), p3.p_dl.begin(), p3.p_dl.end());
    const double inv = max_rel_diff(v1, v3);
    checks.push_back(make("distpc_argmax_invariant_" + tag, inv <= 1e-6, inv, 1e-6));

    const GuardedRun g = run_guarded(s, u, params, &o);
    double trace_diff = g.state.trace.size() == st.trace.size() ? 0.0 : 1.0;
    for (std::size_t k = 0; trace_diff < 1.0 && k < st.trace.size(); ++k) {
      const TraceRow& x = st.trace[k];
      const TraceRow& y = g.state.trace[k];
      std::vector<double> vx = {x.sum_utility}, vy = {y.sum_utility};
      for (const auto* v : {&x.p_ul, &x.p_dl, &x.q_ul, &x.q_dl}) vx.insert(vx.end(), v->begin(), v->end());
      for (const auto* v : {&y.p_ul, &y.p_dl, &y.q_ul, &y.q_dl}) vy.insert(vy.end(), v->begin(), v->end());
      trace_diff = std::max(trace_diff, max_rel_diff(vx, vy));
    }
    const bool counts = std::all_of(g.stats.messages_per_round.begin(), g.stats.messages_per_round.end(),
                                    [&](std::size_t n) { return n == s.num_dl(); });
    checks.push_back(make("onehop_equivalent_" + tag, trace_diff <= 1e-12 && counts && g.stats.violations == 0,
                          trace_diff, 1e-12));

    if (tag == "fig3-pf") rep.files.emplace_back("trace_fig3_pf.csv", [&] {
      std::ostringstream os;
      write_trace_csv(os, st);
      return os.str();
    }());
  }

  // Feedback codec.
  {
    const Scenario s = preset("fig3-pf").scenario();
    bool ok = true;
    for (std::size_t j = 0; j < s.num_dl(); ++j) {
      const FeedbackMsg m = make_feedback(j, 0.5 + static_cast<double>(j), s.noise * 3.0, s);
      ok = ok && decode(encode(m), m.pilot_gain_to_bs) == m;
    }
    checks.push_back(make("feedback_codec_round_trip", ok, 0.0, 0.0));
  }

  // Sweep: dominance and shape.
  {
    Preset pr = preset("fig2-pf");
    const std::vector<double> g = linspace(-140.0, -60.0, 9);
    const auto pts = sweep_interference(pr.params, g, pr.utilities());
    bool dominance = true;
    bool nonincreasing = true;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      dominance = dominance && pts[k].gap >= -1e-9;
      if (k) nonincreasing = nonincreasing && pts[k].p_ul_star <= pts[k - 1].p_ul_star + 1e-6;
    }
    checks.push_back(make("sweep_optimal_dominates_naive", dominance, 0.0, 0.0));
    checks.push_back(make("sweep_p_ul_nonincreasing", nonincreasing, 0.0, 0.0));
    rep.files.emplace_back("sweep_fig2_pf.csv", to_csv(sweep_table(pts)));
  }

  // Scaling: nesting and theta monotone in rho.
  {
    const ScenarioSequence seq =
        ScenarioSequence::doubling(16.0, 3, 2, 0.5, seed, scaling_loss_model());
    bool nested = true;
    for (std::size_t l = 1; l < seq.levels.size(); ++l) {
      const Scenario a = seq.scenario(l - 1);
      const Scenario b = seq.scenario(l);
      for (std::size_t i = 0; i < a.num_ul(); ++i) {
        nested = nested && a.g_ul[i] == b.g_ul[i];
        for (std::size_t j = 0; j < a.num_dl(); ++j) nested = nested && a.g_inter(i, j) == b.g_inter(i, j);
      }
      for (std::size_t j = 0; j < a.num_dl(); ++j) nested = nested && a.g_dl[j] == b.g_dl[j];
    }
    checks.push_back(make("scenario_sequence_nested", nested, 0.0, 0.0));
    const ScalingReport sr = run_scaling(seq, UtilityFn::log(), UtilityFn::log());
    bool rho_monotone = true;
    for (const auto& lv : sr.levels) {
      for (std::size_t r = 1; r < lv.theta.size(); ++r) rho_monotone = rho_monotone && lv.theta[r] >= lv.theta[r - 1];
    }
    checks.push_back(make("theta_nondecreasing_in_rho", rho_monotone, 0.0, 0.0));
    rep.files.emplace_back("scaling.csv", to_csv(sr.table()));
  }

  std::ostringstream os;
  os << "check,passed,value,limit\n";
  for (const Check& c : checks) {
    os << c.name << ',' << (c.passed ? 1 : 0) << ',' << format_double(c.value) << ','
       << format_double(c.limit) << '\n';
  }
  rep.files.emplace_back("checks.csv", os.str());
  return rep;
}

}  // namespace fdpc
