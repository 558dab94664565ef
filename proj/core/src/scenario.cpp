#include "fdpc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "fdpc/model.hpp"

namespace fdpc {
namespace {

void fail(const std::string& what) { throw std::invalid_argument("scenario: " + what); }

bool positive_finite(double x) { return x > 0.0 && std::isfinite(x); }

}  // namespace

double GainMatrix::max_entry() const {
  return data_.empty() ? 0.0 : *std::max_element(data_.begin(), data_.end());
}

std::size_t Neighborhoods::link_count() const {
  std::size_t n = 0;
  for (const auto& s : of_ul) n += s.size();
  return n;
}

Neighborhoods build_neighborhoods(const GainMatrix& gains, double threshold) {
  if (!(threshold >= 0.0)) throw std::invalid_argument("neighbor threshold must be >= 0");
  Neighborhoods out;
  out.of_ul.resize(gains.rows());
  out.of_dl.resize(gains.cols());
  for (std::size_t i = 0; i < gains.rows(); ++i) {
    for (std::size_t j = 0; j < gains.cols(); ++j) {
      if (gains(i, j) >= threshold) {
        out.of_ul[i].push_back(j);
        out.of_dl[j].push_back(i);
      }
    }
  }
  return out;
}

void Scenario::validate() const {
  const std::size_t kul = num_ul();
  const std::size_t kdl = num_dl();
  if (kul == 0 || kdl == 0) fail("needs at least one uplink and one downlink user");
  if (!(antennas >= 1.0) || !std::isfinite(antennas)) fail("antenna count must be >= 1");
  if (!positive_finite(noise)) fail("noise power must be positive");
  if (!positive_finite(p_ul_max)) fail("uplink power cap must be positive");
  if (!positive_finite(p_dl_total)) fail("downlink budget must be positive");
  for (double g : g_ul) {
    if (!positive_finite(g)) fail("uplink path-loss gains must be positive");
  }
  for (double g : g_dl) {
    if (!positive_finite(g)) fail("downlink path-loss gains must be positive");
  }
  if (g_inter.rows() != kul || g_inter.cols() != kdl) fail("interference matrix shape mismatch");
  for (std::size_t i = 0; i < kul; ++i) {
    for (double g : g_inter.row(i)) {
      if (!(g >= 0.0) || !std::isfinite(g)) fail("interference gains must be >= 0");
    }
  }
  if (p0_ul.size() != kul || p0_dl.size() != kdl) fail("high-SINR floor vectors have wrong size");
  for (double p : p0_ul) {
    if (!positive_finite(p)) fail("uplink floor must be positive");
    if (!(p < p_ul_max)) {
      fail("uplink high-SINR floor " + std::to_string(p) + " W is not below P_ul_max " +
           std::to_string(p_ul_max) + " W");
    }
  }
  double floor_sum = 0.0;
  for (double p : p0_dl) {
    if (!positive_finite(p)) fail("downlink floor must be positive");
    floor_sum += p;
  }
  if (floor_sum > p_dl_total) {
    fail("downlink high-SINR floors sum to " + std::to_string(floor_sum) +
         " W, above the budget " + std::to_string(p_dl_total) + " W");
  }
  if (nbr.of_ul.size() != kul || nbr.of_dl.size() != kdl) fail("neighborhood shape mismatch");
  for (std::size_t i = 0; i < kul; ++i) {
    for (std::size_t j : nbr.of_ul[i]) {
      if (j >= kdl) fail("neighbor index out of range");
      const auto& back = nbr.of_dl[j];
      if (!std::binary_search(back.begin(), back.end(), i)) fail("neighborhoods not symmetric");
    }
  }
  if (nbr.link_count() !=
      std::accumulate(nbr.of_dl.begin(), nbr.of_dl.end(), std::size_t{0},
                      [](std::size_t n, const auto& v) { return n + v.size(); })) {
    fail("neighborhoods not symmetric");
  }
}

Scenario make_scenario(const ScenarioParams& params) {
  Scenario s;
  s.antennas = params.antennas;
  s.g_ul = params.g_ul;
  s.g_dl = params.g_dl;
  s.g_inter = params.g_inter;
  s.noise = params.noise;
  s.p_ul_max = params.p_ul_max;
  s.p_dl_total = params.p_dl_total;
  if (s.g_inter.rows() != s.g_ul.size() || s.g_inter.cols() != s.g_dl.size()) {
    fail("interference matrix shape mismatch");
  }
  if (!(params.sigma_min > 0.0)) fail("sigma_min must be > 0");
  s.nbr = build_neighborhoods(s.g_inter, params.neighbor_threshold);

  s.p0_ul.resize(s.num_ul());
  for (std::size_t i = 0; i < s.num_ul(); ++i) {
    s.p0_ul[i] = params.sigma_min * s.noise / (s.antennas * s.g_ul[i]);
  }
  const std::vector<double> all_max(s.num_ul(), s.p_ul_max);
  s.p0_dl.resize(s.num_dl());
  for (std::size_t j = 0; j < s.num_dl(); ++j) {
    s.p0_dl[j] =
        params.sigma_min * interference_plus_noise(s, all_max, j) / (s.antennas * s.g_dl[j]);
  }
  s.validate();
  return s;
}

LogPowers LogPowers::from(const PowerAllocation& p) {
  LogPowers out;
  out.ul.reserve(p.p_ul.size());
  out.dl.reserve(p.p_dl.size());
  for (double v : p.p_ul) out.ul.push_back(std::log(v));
  for (double v : p.p_dl) out.dl.push_back(std::log(v));
  return out;
}

PowerAllocation LogPowers::to_linear() const {
  PowerAllocation out;
  out.p_ul.reserve(ul.size());
  out.p_dl.reserve(dl.size());
  for (double v : ul) out.p_ul.push_back(std::exp(v));
  for (double v : dl) out.p_dl.push_back(std::exp(v));
  return out;
}

bool is_feasible(const Scenario& s, const PowerAllocation& p, double rel_tol) {
  if (p.p_ul.size() != s.num_ul() || p.p_dl.size() != s.num_dl()) return false;
  for (std::size_t i = 0; i < s.num_ul(); ++i) {
    if (p.p_ul[i] < s.p0_ul[i] * (1.0 - rel_tol) || p.p_ul[i] > s.p_ul_max * (1.0 + rel_tol)) {
      return false;
    }
  }
  double total = 0.0;
  for (std::size_t j = 0; j < s.num_dl(); ++j) {
    if (p.p_dl[j] < s.p0_dl[j] * (1.0 - rel_tol)) return false;
    total += p.p_dl[j];
  }
  return total <= s.p_dl_total * (1.0 + rel_tol);
}

}  // namespace fdpc
