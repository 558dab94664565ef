#include "fdpc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "fdpc/model.hpp"
#include "fdpc/units.hpp"

namespace fdpc {

ScenarioSequence ScenarioSequence::doubling(double C, int num_levels, std::size_t base_ul,
                                            double ratio, std::uint64_t seed,
                                            const LossModel& loss) {
  if (num_levels < 1) throw std::invalid_argument("doubling: need at least one level");
  if (!(ratio > 0.0)) throw std::invalid_argument("doubling: ratio must be > 0");
  ScenarioSequence seq;
  seq.C = C;
  seq.ratio = ratio;
  seq.seed = seed;
  seq.loss = loss;
  for (int l = 0; l < num_levels; ++l) {
    Level lv;
    lv.num_ul = base_ul << l;
    lv.num_dl = static_cast<std::size_t>(std::llround(static_cast<double>(lv.num_ul) / ratio));
    lv.antennas = std::round(C * static_cast<double>(lv.num_ul * lv.num_dl));
    seq.levels.push_back(lv);
  }
  seq.validate();
  return seq;
}

void ScenarioSequence::validate() const {
  if (!(C > 0.0)) throw std::invalid_argument("ScenarioSequence: C must be > 0");
  if (levels.empty()) throw std::invalid_argument("ScenarioSequence: no levels");
  for (std::size_t l = 0; l < levels.size(); ++l) {
    if (levels[l].num_ul == 0 || levels[l].num_dl == 0) {
      throw std::invalid_argument("ScenarioSequence: empty level " + std::to_string(l));
    }
    if (l == 0) continue;
    const Level& a = levels[l - 1];
    const Level& b = levels[l];
    if (b.num_ul <= a.num_ul || b.num_dl <= a.num_dl) {
      throw std::invalid_argument("ScenarioSequence: users must strictly grow at level " +
                                  std::to_string(l));
    }
    if (b.antennas <= a.antennas) {
      throw std::invalid_argument("ScenarioSequence: M must strictly grow at level " +
                                  std::to_string(l));
    }
  }
}

Scenario ScenarioSequence::scenario(std::size_t level) const {
  const Level& lv = levels.at(level);
  return random_scenario(seed, lv.num_ul, lv.num_dl, lv.antennas, loss);
}

double theta_fraction(std::span<const double> p_ul, double rho, double p_max) {
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("theta_fraction: rho in (0, 1)");
  if (p_ul.empty()) return 0.0;
  const auto n = std::count_if(p_ul.begin(), p_ul.end(), [&](double p) { return p <= rho * p_max; });
  return static_cast<double>(n) / static_cast<double>(p_ul.size());
}

double psi_fraction(std::span<const double> p_dl, double omega, double p_total) {
  if (p_dl.empty()) return 0.0;
  const double cut = omega * p_total / static_cast<double>(p_dl.size());
  const auto n = std::count_if(p_dl.begin(), p_dl.end(), [&](double p) { return p < cut; });
  return static_cast<double>(n) / static_cast<double>(p_dl.size());
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

CsvTable ScalingReport::table() const {
  CsvTable t;
  t.header = {"level", "K_ul", "K_dl", "M"};
  for (double r : rhos) t.header.push_back("theta_" + format_double(r));
  for (const char* h : {"psi", "mean_p_ul", "median_p_ul", "utility_opt", "utility_naive",
                        "duality_gap", "converged"}) {
    t.header.emplace_back(h);
  }
  for (const LevelReport& lr : levels) {
    std::vector<double> row = {static_cast<double>(lr.level), static_cast<double>(lr.size.num_ul),
                               static_cast<double>(lr.size.num_dl), lr.size.antennas};
    row.insert(row.end(), lr.theta.begin(), lr.theta.end());
    row.insert(row.end(), {lr.psi, lr.mean_p_ul, lr.median_p_ul, lr.utility_opt,
                           lr.utility_naive, lr.duality_gap, lr.converged ? 1.0 : 0.0});
    t.rows.push_back(std::move(row));
  }
  return t;
}

ScalingReport run_scaling(const ScenarioSequence& seq, const UtilityFn& ul_fn,
                          const UtilityFn& dl_fn, std::vector<double> rhos, double omega,
                          const OracleOptions& opts) {
  seq.validate();
  ScalingReport rep;
  rep.rhos = std::move(rhos);
  rep.omega = omega;
  OracleOptions naive_opts = opts;
  naive_opts.fix_uplink_at_max = true;
  for (std::size_t l = 0; l < seq.levels.size(); ++l) {
    const Scenario s = seq.scenario(l);
    const Utilities u = Utilities::uniform(s.num_ul(), s.num_dl(), ul_fn, dl_fn);
    const OracleResult opt = solve_centralized(s, u, opts);
    if (!opt.converged) {
      throw std::runtime_error("run_scaling: oracle failed at level " + std::to_string(l) + ": " +
                               opt.status);
    }
    const OracleResult naive = solve_centralized(s, u, naive_opts);
    LevelReport lr;
    lr.level = l;
    lr.size = seq.levels[l];
    for (double rho : rep.rhos) lr.theta.push_back(theta_fraction(opt.p_star.p_ul, rho, s.p_ul_max));
    lr.psi = psi_fraction(opt.p_star.p_dl, omega, s.p_dl_total);
    const auto& p = opt.p_star.p_ul;
    lr.mean_p_ul = std::accumulate(p.begin(), p.end(), 0.0) / static_cast<double>(p.size());
    lr.median_p_ul = median(p);
    lr.utility_opt = opt.utility_star;
    lr.utility_naive = naive.utility_star;
    lr.duality_gap = opt.duality_gap;
    lr.iterations = opt.iterations;
    lr.converged = opt.converged;
    rep.levels.push_back(std::move(lr));
  }
  return rep;
}

std::vector<SweepPoint> sweep_interference(const ScenarioParams& base,
                                           std::span<const double> g_inter_db,
                                           const Utilities& utils, const OracleOptions& opts) {
  if (base.g_ul.size() != 1 || base.g_dl.size() != 1) {
    throw std::invalid_argument("sweep_interference: needs a 1 x 1 cell");
  }
  OracleOptions naive_opts = opts;
  naive_opts.fix_uplink_at_max = true;
  std::vector<SweepPoint> out;
  for (double db : g_inter_db) {
    ScenarioParams p = base;
    p.g_inter = GainMatrix(1, 1, db_to_linear(db));
    const Scenario s = make_scenario(p);
    const OracleResult opt = solve_centralized(s, utils, opts);
    const OracleResult naive = solve_centralized(s, utils, naive_opts);
    SweepPoint pt;
    pt.g_inter_db = db;
    pt.p_ul_star = opt.p_star.p_ul[0];
    pt.p_dl_star = opt.p_star.p_dl[0];
    pt.utility_opt = opt.utility_star;
    pt.utility_naive = naive.utility_star;
    pt.gap = opt.utility_star - naive.utility_star;
    pt.duality_gap = opt.duality_gap;
    pt.converged = opt.converged && naive.converged;
    out.push_back(pt);
  }
  return out;
}

CsvTable sweep_table(const std::vector<SweepPoint>& points) {
  CsvTable t;
  t.header = {"g_inter_db", "p_ul_star", "p_dl_star", "utility_opt",
              "utility_naive", "gap", "duality_gap", "converged"};
  for (const SweepPoint& p : points) {
    t.rows.push_back({p.g_inter_db, p.p_ul_star, p.p_dl_star, p.utility_opt, p.utility_naive,
                      p.gap, p.duality_gap, p.converged ? 1.0 : 0.0});
  }
  return t;
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) return {};
  if (n == 1) return {lo};
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) v[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (n - 1);
  return v;
}

LinearFit fit_log_linear(const std::vector<TraceRow>& trace, int k0, int k1) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const TraceRow& r : trace) {
    if (r.iter < k0 || r.iter > k1) continue;
    if (!(r.eps > 0.0) || !std::isfinite(r.eps)) continue;
    xs.push_back(r.iter);
    ys.push_back(std::log(r.eps));
  }
  LinearFit fit;
  fit.n = xs.size();
  if (fit.n < 2) return fit;
  const double n = static_cast<double>(fit.n);
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
    syy += (ys[k] - my) * (ys[k] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

int settle_iteration(const std::vector<TraceRow>& trace, double rel) {
  if (trace.empty()) return 0;
  const double final_u = trace.back().sum_utility;
  const double tol = rel * std::abs(final_u);
  int settle = trace.back().iter;
  for (auto it = trace.rbegin(); it != trace.rend(); ++it) {
    if (!(std::abs(it->sum_utility - final_u) <= tol)) break;
    settle = it->iter;
  }
  return settle;
}

ConvergenceStudy convergence_study(const Scenario& s, const Utilities& utils,
                                   const std::vector<double>& gammas, const AlgoParams& base) {
  ConvergenceStudy study;
  study.oracle = solve_centralized(s, utils);
  for (double g : gammas) {
    AlgoParams p = base;
    p.gamma = g;
    ConvergenceRun run_out;
    run_out.gamma = g;
    run_out.state = run(s, utils, p, &study.oracle);
    run_out.fit = fit_log_linear(run_out.state.trace);
    const double u_final = run_out.state.trace.back().sum_utility;
    run_out.final_rel_gap =
        std::abs(u_final - study.oracle.utility_star) / std::abs(study.oracle.utility_star);
    run_out.settle_iter = settle_iteration(run_out.state.trace);
    study.runs.push_back(std::move(run_out));
  }
  return study;
}

}  // namespace fdpc
