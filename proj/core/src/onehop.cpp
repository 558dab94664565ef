#include "fdpc/onehop.hpp"

#include <cmath>

#include "fdpc/model.hpp"
#include "fdpc/projection.hpp"

namespace fdpc {
namespace {

using FK = FactKind;
constexpr std::size_t npos = FactRef::npos;

double measure(const AlgoParams& params, LinkDir dir, std::size_t k, int round, double sinr) {
  return params.sinr_noise ? params.sinr_noise(dir, k, round, sinr) : sinr;
}

struct BsAgent {
  KnowledgeTable kt;
  std::vector<double> p_hat_dl;
  std::vector<double> q_dl;
  std::vector<double> r_dl;
};

struct UlAgent {
  KnowledgeTable kt;
  double p_hat;
  double q;
  double r;
};

struct DlAgent {
  KnowledgeTable kt;
  double q;
};

// Transmitted powers and what receivers measure from them.
struct Channel {
  const Scenario& s;
  std::vector<double> p_ul;
  std::vector<double> p_dl;
  std::vector<double> in_dl;

  void transmit(const std::vector<double>& p_hat_ul, const std::vector<double>& p_hat_dl) {
    p_ul.resize(p_hat_ul.size());
    p_dl.resize(p_hat_dl.size());
    for (std::size_t i = 0; i < p_ul.size(); ++i) p_ul[i] = std::exp(p_hat_ul[i]);
    for (std::size_t j = 0; j < p_dl.size(); ++j) p_dl[j] = std::exp(p_hat_dl[j]);
    in_dl.resize(s.num_dl());
    for (std::size_t j = 0; j < s.num_dl(); ++j) in_dl[j] = interference_plus_noise(s, p_ul, j);
  }
  double ul_sinr(std::size_t i) const { return uplink_sinr(s, p_ul[i], i); }
  double dl_sinr(std::size_t j) const { return s.antennas * p_dl[j] * s.g_dl[j] / in_dl[j]; }
};

}  // namespace

GuardedRun run_guarded(const Scenario& s, const Utilities& utils, const AlgoParams& params,
                       const OracleResult* oracle, const GuardOptions& options) {
  // The reference state supplies the initial point and the configured price scale.
  AlgoState st = init(s, params);
  st.price_scale = resolve_price_scale(s, utils, params);
  const Utilities scaled = utils.scaled(st.price_scale);
  const std::size_t kul = s.num_ul();
  const std::size_t kdl = s.num_dl();

  BsAgent bs{KnowledgeTable(Role::bs(), s), st.p_hat_dl, st.q_dl, st.r_dl};
  std::vector<UlAgent> uls;
  for (std::size_t i = 0; i < kul; ++i) {
    uls.push_back({KnowledgeTable(Role::uplink(i), s), st.p_hat_ul[i], st.q_ul[i], st.r_ul[i]});
  }
  std::vector<DlAgent> dls;
  for (std::size_t j = 0; j < kdl; ++j) dls.push_back({KnowledgeTable(Role::downlink(j), s), st.q_dl[j]});

  std::vector<double> log_floor_dl(kdl);
  for (std::size_t j = 0; j < kdl; ++j) log_floor_dl[j] = std::log(s.p0_dl[j]);
  const double log_hi_ul = std::log(s.p_ul_max);

  Channel ch{s, {}, {}, {}};
  ch.transmit(st.p_hat_ul, st.p_hat_dl);

  GuardedRun out;
  RoundMonitor monitor(s, utils, params,
                       oracle ? std::optional<double>(oracle->utility_star) : std::nullopt);
  monitor.record(st);

  auto guarded_read = [&](KnowledgeTable& kt, const FactRef& f) {
    try {
      kt.read(f);
    } catch (const AccessViolation&) {
      ++out.stats.violations;
      throw;
    }
  };

  while (st.status == RunStatus::running) {
    // Downlink users broadcast feedback built from their own IN and price.
    std::vector<FeedbackMsg> msgs;
    std::size_t bytes = 0;
    for (std::size_t j = 0; j < kdl; ++j) {
      guarded_read(dls[j].kt, {FK::interference, npos, j});
      guarded_read(dls[j].kt, {FK::dl_price, npos, j});
      msgs.push_back(make_feedback(j, dls[j].q, ch.in_dl[j], s));
      bytes += encode(msgs.back()).size();
    }
    out.stats.messages_per_round.push_back(msgs.size());
    out.stats.payload_scalars_per_round.push_back(msgs.size());
    out.stats.wire_bytes_per_round = bytes;

    // Base station: downlink powers, then its prices from recovered SINRs.
    guarded_read(bs.kt, {FK::dl_budget, npos, npos});
    std::vector<double> y(bs.p_hat_dl);
    for (std::size_t j = 0; j < kdl; ++j) {
      guarded_read(bs.kt, {FK::dl_power, npos, j});
      guarded_read(bs.kt, {FK::dl_price, npos, j});
      y[j] += params.gamma * bs.q_dl[j];
    }
    std::vector<double> next_dl = project_log_budget(y, log_floor_dl, s.p_dl_total).x;
    for (std::size_t j = 0; j < kdl; ++j) {
      guarded_read(bs.kt, {FK::dl_gain, npos, j});
      guarded_read(bs.kt, {FK::dl_sinr, npos, j});
      const double sinr = measure(params, LinkDir::downlink, j, st.t,
                                  bs_recover_sinr(msgs[j], std::exp(bs.p_hat_dl[j]), bs.q_dl[j],
                                                  s.antennas));
      const PriceUpdate u = price_update(scaled.dl[j], bs.q_dl[j], sinr, params);
      bs.q_dl[j] = u.q;
      bs.r_dl[j] = u.target_rate;
    }

    // Uplink users: overheard metrics, own power, own price.
    for (std::size_t i = 0; i < kul; ++i) {
      UlAgent& a = uls[i];
      guarded_read(a.kt, {FK::ul_power, i, npos});
      guarded_read(a.kt, {FK::ul_price, i, npos});
      guarded_read(a.kt, {FK::ul_bounds, i, npos});
      const double p = std::exp(a.p_hat);
      std::vector<double> weighted;
      for (const FeedbackMsg& msg : msgs) {
        bool hears = false;
        for (const auto& e : msg.pilot_gain_to_ul) hears = hears || e.first == i;
        if (!hears) continue;
        guarded_read(a.kt, {FK::inter_gain, i, msg.sender});
        guarded_read(a.kt, {FK::metric, i, msg.sender});
        weighted.push_back(ul_overhear_metric(msg, i, p).weighted_term);
      }
      if (options.two_hop_probe && options.two_hop_probe->first == i) {
        const std::size_t other = options.two_hop_probe->second;
        const std::size_t j = other < kul && !s.nbr.of_ul[other].empty() ? s.nbr.of_ul[other][0] : 0;
        guarded_read(a.kt, {FK::metric, other, j});
      }
      const double next =
          ul_power_update(a.p_hat, a.q, weighted, std::log(s.p0_ul[i]), log_hi_ul, params.gamma);
      guarded_read(a.kt, {FK::ul_sinr, i, npos});
      const double sinr = measure(params, LinkDir::uplink, i, st.t, ch.ul_sinr(i));
      const PriceUpdate u = price_update(scaled.ul[i], a.q, sinr, params);
      a.q = u.q;
      a.r = u.target_rate;
      a.p_hat = next;
    }

    // Downlink users track their own price from the SINR they measure.
    for (std::size_t j = 0; j < kdl; ++j) {
      guarded_read(dls[j].kt, {FK::dl_sinr, npos, j});
      const double sinr = measure(params, LinkDir::downlink, j, st.t, ch.dl_sinr(j));
      dls[j].q = price_update(scaled.dl[j], dls[j].q, sinr, params).q;
    }

    bs.p_hat_dl = std::move(next_dl);
    for (std::size_t i = 0; i < kul; ++i) {
      st.p_hat_ul[i] = uls[i].p_hat;
      st.q_ul[i] = uls[i].q;
      st.r_ul[i] = uls[i].r;
    }
    st.p_hat_dl = bs.p_hat_dl;
    st.q_dl = bs.q_dl;
    st.r_dl = bs.r_dl;
    ch.transmit(st.p_hat_ul, st.p_hat_dl);
    st.in_dl = ch.in_dl;
    ++st.t;
    monitor.record(st);
  }

  out.stats.read_sets[bs.kt.role()] = bs.kt.read_set();
  for (const auto& a : uls) out.stats.read_sets[a.kt.role()] = a.kt.read_set();
  for (const auto& a : dls) out.stats.read_sets[a.kt.role()] = a.kt.read_set();
  out.state = std::move(st);
  return out;
}

Overhead overhead_accounting(const Neighborhoods& nbr) {
  Overhead o;
  o.centralized_link_items = nbr.of_ul.size() + nbr.of_dl.size();
  o.centralized_interference_items = nbr.link_count();
  o.centralized_items = o.centralized_link_items + o.centralized_interference_items;
  o.onehop_bs_items_per_round = nbr.of_dl.size();
  for (const auto& n : nbr.of_ul) o.onehop_ul_items.push_back(n.size());
  return o;
}

Overhead overhead_accounting(const Scenario& s) { return overhead_accounting(s.nbr); }

}  // namespace fdpc
