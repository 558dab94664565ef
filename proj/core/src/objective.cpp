#include "fdpc/objective.hpp"

#include <cmath>

#include "fdpc/model.hpp"

namespace fdpc {

LinkState link_state(const Scenario& s, const PowerAllocation& p) {
  LinkState st;
  st.rates.ul.resize(s.num_ul());
  st.rates.dl.resize(s.num_dl());
  st.in_dl.resize(s.num_dl());
  for (std::size_t i = 0; i < s.num_ul(); ++i) {
    st.rates.ul[i] = rate_hs(uplink_sinr(s, p.p_ul[i], i));
  }
  for (std::size_t j = 0; j < s.num_dl(); ++j) {
    st.in_dl[j] = interference_plus_noise(s, p.p_ul, j);
    st.rates.dl[j] = rate_hs(s.antennas * p.p_dl[j] * s.g_dl[j] / st.in_dl[j]);
  }
  return st;
}

Prices marginal_prices(const Scenario& s, const Utilities& utils, const PowerAllocation& p) {
  const LinkState st = link_state(s, p);
  Prices q;
  q.ul.resize(s.num_ul());
  q.dl.resize(s.num_dl());
  for (std::size_t i = 0; i < s.num_ul(); ++i) q.ul[i] = utils.ul[i].derivative(st.rates.ul[i]);
  for (std::size_t j = 0; j < s.num_dl(); ++j) q.dl[j] = utils.dl[j].derivative(st.rates.dl[j]);
  return q;
}

LogPowers assemble_gradient(const Scenario& s, const Prices& q, const PowerAllocation& p,
                            const std::vector<double>& in_dl) {
  LogPowers g;
  g.ul = q.ul;
  g.dl = q.dl;
  for (std::size_t i = 0; i < s.num_ul(); ++i) {
    for (std::size_t j : s.nbr.of_ul[i]) {
      g.ul[i] -= q.dl[j] * s.g_inter(i, j) * p.p_ul[i] / in_dl[j];
    }
  }
  return g;
}

double objective_value(const Scenario& s, const Utilities& utils, const LogPowers& x) {
  const PowerAllocation p = x.to_linear();
  const LinkState st = link_state(s, p);
  double total = 0.0;
  for (std::size_t i = 0; i < s.num_ul(); ++i) total += utils.ul[i].value(st.rates.ul[i]);
  for (std::size_t j = 0; j < s.num_dl(); ++j) total += utils.dl[j].value(st.rates.dl[j]);
  return total;
}

double objective_change(const Scenario& s, const Utilities& utils, const LogPowers& from,
                        const LogPowers& to) {
  const PowerAllocation p = from.to_linear();
  const LinkState st = link_state(s, p);
  double total = 0.0;
  std::vector<double> dp(s.num_ul());
  for (std::size_t i = 0; i < s.num_ul(); ++i) {
    const double dx = to.ul[i] - from.ul[i];
    dp[i] = p.p_ul[i] * std::expm1(dx);
    total += utils.ul[i].value_change(st.rates.ul[i], dx);
  }
  for (std::size_t j = 0; j < s.num_dl(); ++j) {
    double d_in = 0.0;
    for (std::size_t i : s.nbr.of_dl[j]) d_in += s.g_inter(i, j) * dp[i];
    const double dr = (to.dl[j] - from.dl[j]) - std::log1p(d_in / st.in_dl[j]);
    total += utils.dl[j].value_change(st.rates.dl[j], dr);
  }
  return total;
}

ObjectiveEval evaluate_objective(const Scenario& s, const Utilities& utils, const LogPowers& x) {
  const PowerAllocation p = x.to_linear();
  const LinkState st = link_state(s, p);
  ObjectiveEval out;
  Prices q;
  q.ul.resize(s.num_ul());
  q.dl.resize(s.num_dl());
  for (std::size_t i = 0; i < s.num_ul(); ++i) {
    out.value += utils.ul[i].value(st.rates.ul[i]);
    q.ul[i] = utils.ul[i].derivative(st.rates.ul[i]);
  }
  for (std::size_t j = 0; j < s.num_dl(); ++j) {
    out.value += utils.dl[j].value(st.rates.dl[j]);
    q.dl[j] = utils.dl[j].derivative(st.rates.dl[j]);
  }
  out.gradient = assemble_gradient(s, q, p, st.in_dl);
  return out;
}

}  // namespace fdpc
