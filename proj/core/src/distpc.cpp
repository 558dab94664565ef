#include "fdpc/distpc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "fdpc/model.hpp"
#include "fdpc/projection.hpp"
#include "fdpc/report.hpp"

namespace fdpc {

void AlgoParams::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("gamma must be > 0");
  if (!(q_min > 0.0)) throw std::invalid_argument("q_min must be > 0");
  if (!(r_max > 0.0)) throw std::invalid_argument("r_max must be > 0");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (stop_window < 1) throw std::invalid_argument("stop_window must be >= 1");
  if (!(stop_tol >= 0.0)) throw std::invalid_argument("stop_tol must be >= 0");
  if (!(price_scale >= 0.0) || !std::isfinite(price_scale)) {
    throw std::invalid_argument("price_scale must be >= 0");
  }
}

std::string to_string(RunStatus status) {
  switch (status) {
    case RunStatus::running: return "running";
    case RunStatus::converged: return "converged";
    case RunStatus::max_iters: return "max_iters";
    case RunStatus::unstable: return "unstable";
  }
  return "unknown";
}

PowerAllocation AlgoState::powers() const {
  return LogPowers{p_hat_ul, p_hat_dl}.to_linear();
}

namespace {

std::vector<double> log_of(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [](double x) { return std::log(x); });
  return out;
}

std::vector<double> exp_of(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [](double x) { return std::exp(x); });
  return out;
}

void refresh_interference(AlgoState& st, const Scenario& s) {
  const std::vector<double> p_ul = exp_of(st.p_hat_ul);
  for (std::size_t j = 0; j < s.num_dl(); ++j) st.in_dl[j] = interference_plus_noise(s, p_ul, j);
}

}  // namespace

AlgoState init(const Scenario& s, const AlgoParams& params) {
  s.validate();
  params.validate();
  AlgoState st;
  st.q_ul.assign(s.num_ul(), params.q_min);
  st.q_dl.assign(s.num_dl(), params.q_min);
  st.p_hat_ul.assign(s.num_ul(), std::log(s.p_ul_max));
  const std::vector<double> even(s.num_dl(),
                                 std::log(s.p_dl_total / static_cast<double>(s.num_dl())));
  st.p_hat_dl = project_log_budget(even, log_of(s.p0_dl), s.p_dl_total).x;
  st.in_dl.assign(s.num_dl(), 0.0);
  refresh_interference(st, s);
  st.r_ul.assign(s.num_ul(), params.r_max);
  st.r_dl.assign(s.num_dl(), params.r_max);
  return st;
}

double resolve_price_scale(const Scenario& s, const Utilities& utils, const AlgoParams& params) {
  if (params.price_scale > 0.0) return params.price_scale;
  // A quarter of the geometric mean of |U''|^-1 at the initial rates.
  const AlgoState st = init(s, params);
  const LinkState ls = link_state(s, st.powers());
  double log_sum = 0.0;
  for (std::size_t i = 0; i < s.num_ul(); ++i) {
    log_sum -= std::log(std::abs(utils.ul[i].second_derivative(ls.rates.ul[i])));
  }
  for (std::size_t j = 0; j < s.num_dl(); ++j) {
    log_sum -= std::log(std::abs(utils.dl[j].second_derivative(ls.rates.dl[j])));
  }
  return 0.25 * std::exp(log_sum / static_cast<double>(s.num_ul() + s.num_dl()));
}

std::vector<double> dl_power_step(const AlgoState& state, const Scenario& s,
                                  const AlgoParams& params) {
  std::vector<double> y(state.p_hat_dl);
  for (std::size_t j = 0; j < y.size(); ++j) y[j] += params.gamma * state.q_dl[j];
  return project_log_budget(y, log_of(s.p0_dl), s.p_dl_total).x;
}

double ul_power_update(double p_hat, double q, const std::vector<double>& weighted_terms,
                       double log_lo, double log_hi, double gamma) {
  double interference_cost = 0.0;
  for (double w : weighted_terms) interference_cost += w;
  return std::clamp(p_hat + gamma * (q - interference_cost), log_lo, log_hi);
}

std::vector<std::vector<double>> direct_metrics(const AlgoState& state, const Scenario& s) {
  std::vector<std::vector<double>> m(s.num_ul());
  for (std::size_t i = 0; i < s.num_ul(); ++i) {
    for (std::size_t j : s.nbr.of_ul[i]) {
      m[i].push_back((state.q_dl[j] / state.in_dl[j]) * s.g_inter(i, j));
    }
  }
  return m;
}

std::vector<double> ul_power_step(const AlgoState& state, const Scenario& s,
                                  const AlgoParams& params,
                                  const std::vector<std::vector<double>>& metrics) {
  if (metrics.size() != s.num_ul()) throw std::invalid_argument("ul_power_step: metrics per user");
  const double log_hi = std::log(s.p_ul_max);
  std::vector<double> out(s.num_ul());
  for (std::size_t i = 0; i < s.num_ul(); ++i) {
    if (metrics[i].size() != s.nbr.of_ul[i].size()) {
      throw std::invalid_argument("ul_power_step: missing metric for uplink user " +
                                  std::to_string(i));
    }
    const double p = std::exp(state.p_hat_ul[i]);
    std::vector<double> weighted(metrics[i].size());
    for (std::size_t k = 0; k < weighted.size(); ++k) weighted[k] = metrics[i][k] * p;
    out[i] = ul_power_update(state.p_hat_ul[i], state.q_ul[i], weighted, std::log(s.p0_ul[i]),
                             log_hi, params.gamma);
  }
  return out;
}

PriceUpdate price_update(const UtilityFn& u, double q, double sinr, const AlgoParams& params) {
  const double target = std::min(params.r_max, u.inv_derivative(q));
  return {std::max(params.q_min, q + params.gamma * (target - std::log(sinr))), target};
}

void price_step(AlgoState& state, const Scenario& s, const Utilities& scaled_utils,
                const AlgoParams& params) {
  const PowerAllocation p = state.powers();
  for (std::size_t i = 0; i < s.num_ul(); ++i) {
    double sinr = uplink_sinr(s, p.p_ul[i], i);
    if (params.sinr_noise) sinr = params.sinr_noise(LinkDir::uplink, i, state.t, sinr);
    const PriceUpdate u = price_update(scaled_utils.ul[i], state.q_ul[i], sinr, params);
    state.q_ul[i] = u.q;
    state.r_ul[i] = u.target_rate;
  }
  for (std::size_t j = 0; j < s.num_dl(); ++j) {
    double sinr = s.antennas * p.p_dl[j] * s.g_dl[j] / state.in_dl[j];
    if (params.sinr_noise) sinr = params.sinr_noise(LinkDir::downlink, j, state.t, sinr);
    const PriceUpdate u = price_update(scaled_utils.dl[j], state.q_dl[j], sinr, params);
    state.q_dl[j] = u.q;
    state.r_dl[j] = u.target_rate;
  }
}

RoundMonitor::RoundMonitor(const Scenario& s, const Utilities& utils, const AlgoParams& params,
                           std::optional<double> utility_star)
    : s_(s), utils_(utils), params_(params), u_star_(utility_star) {}

bool RoundMonitor::oscillating_at_bound(const AlgoState& state) const {
  const auto& tr = state.trace;
  if (tr.size() < 3) return false;
  const TraceRow& a = tr[tr.size() - 3];
  const TraceRow& b = tr[tr.size() - 2];
  const TraceRow& c = tr[tr.size() - 1];
  constexpr double kMove = 1e-6;  // log-domain change counted as a swing
  auto swings = [&](double x0, double x1, double x2, double lo, double hi) {
    const double d1 = std::log(x1) - std::log(x0);
    const double d2 = std::log(x2) - std::log(x1);
    if (std::abs(d1) < kMove || std::abs(d2) < kMove || d1 * d2 >= 0.0) return false;
    auto at = [&](double x) {
      return std::abs(std::log(x) - std::log(lo)) < 1e-12 ||
             std::abs(std::log(x) - std::log(hi)) < 1e-12;
    };
    return at(x0) || at(x1) || at(x2);
  };
  for (std::size_t i = 0; i < s_.num_ul(); ++i) {
    if (swings(a.p_ul[i], b.p_ul[i], c.p_ul[i], s_.p0_ul[i], s_.p_ul_max)) return true;
  }
  for (std::size_t j = 0; j < s_.num_dl(); ++j) {
    if (swings(a.p_dl[j], b.p_dl[j], c.p_dl[j], s_.p0_dl[j], s_.p_dl_total)) return true;
  }
  return false;
}

void RoundMonitor::record(AlgoState& state) {
  TraceRow row;
  row.iter = state.t;
  const PowerAllocation p = state.powers();
  row.p_ul = p.p_ul;
  row.p_dl = p.p_dl;
  row.q_ul = state.q_ul;
  row.q_dl = state.q_dl;

  bool finite = true;
  for (double x : state.p_hat_ul) finite = finite && std::isfinite(x);
  for (double x : state.p_hat_dl) finite = finite && std::isfinite(x);
  for (double x : state.q_ul) finite = finite && std::isfinite(x);
  for (double x : state.q_dl) finite = finite && std::isfinite(x);
  row.sum_utility = finite ? sum_utility(s_, utils_, p, RateMode::high_snr)
                           : std::numeric_limits<double>::quiet_NaN();
  row.eps = u_star_ ? std::abs(row.sum_utility - *u_star_)
                    : std::numeric_limits<double>::quiet_NaN();
  state.trace.push_back(std::move(row));
  const TraceRow& cur = state.trace.back();

  const std::string at_gamma = " at gamma=" + format_double(params_.gamma);
  if (!std::isfinite(cur.sum_utility)) {
    state.status = RunStatus::unstable;
    state.note = "non-finite state" + at_gamma;
    return;
  }
  if (!is_feasible(s_, p, 1e-9)) {
    throw std::logic_error("distpc: infeasible powers after round " + std::to_string(state.t));
  }
  if (u_star_ && cur.sum_utility > *u_star_ + 1e-6 * std::abs(*u_star_)) {
    state.status = RunStatus::unstable;
    state.note = "utility exceeds the optimum" + at_gamma;
    return;
  }
  osc_rounds_ = oscillating_at_bound(state) ? osc_rounds_ + 1 : 0;
  if (osc_rounds_ > 100) {
    state.status = RunStatus::unstable;
    state.note = "period-2 oscillation at a power bound" + at_gamma;
    return;
  }
  const int w = params_.stop_window;
  if (state.t >= 2 * w) {
    const double past = state.trace[state.trace.size() - 1 - static_cast<std::size_t>(w)].sum_utility;
    const double scale = std::max(std::abs(cur.sum_utility), 1e-300);
    if (std::abs(cur.sum_utility - past) <= params_.stop_tol * scale) {
      state.status = RunStatus::converged;
      return;
    }
  }
  if (state.t >= params_.max_iters) state.status = RunStatus::max_iters;
}

AlgoState run(const Scenario& s, const Utilities& utils, const AlgoParams& params,
              const OracleResult* oracle) {
  AlgoState st = init(s, params);
  st.price_scale = resolve_price_scale(s, utils, params);
  const Utilities scaled = utils.scaled(st.price_scale);
  RoundMonitor monitor(s, utils, params,
                       oracle ? std::optional<double>(oracle->utility_star) : std::nullopt);
  monitor.record(st);
  while (st.status == RunStatus::running) {
    const std::vector<std::vector<double>> m = direct_metrics(st, s);
    std::vector<double> next_dl = dl_power_step(st, s, params);
    std::vector<double> next_ul = ul_power_step(st, s, params, m);
    price_step(st, s, scaled, params);
    st.p_hat_dl = std::move(next_dl);
    st.p_hat_ul = std::move(next_ul);
    refresh_interference(st, s);
    ++st.t;
    monitor.record(st);
  }
  return st;
}

void write_trace_csv(std::ostream& out, const AlgoState& state) {
  if (state.trace.empty()) return;
  const TraceRow& first = state.trace.front();
  out << "iter,sum_utility,eps";
  auto names = [&](const char* prefix, std::size_t n) {
    for (std::size_t k = 1; k <= n; ++k) out << ',' << prefix << k;
  };
  names("p_ul_", first.p_ul.size());
  names("p_dl_", first.p_dl.size());
  names("q_ul_", first.q_ul.size());
  names("q_dl_", first.q_dl.size());
  out << '\n';
  for (const TraceRow& r : state.trace) {
    out << r.iter << ',' << format_double(r.sum_utility) << ',' << format_double(r.eps);
    for (const auto* v : {&r.p_ul, &r.p_dl, &r.q_ul, &r.q_dl}) {
      for (double x : *v) out << ',' << format_double(x);
    }
    out << '\n';
  }
}

}  // namespace fdpc
