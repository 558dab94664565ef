#include "fdpc/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fdpc {
namespace {

void check_index(std::size_t idx, std::size_t size, const char* what) {
  if (idx >= size) {
    throw std::out_of_range(std::string(what) + " index " + std::to_string(idx) +
                            " out of range (size " + std::to_string(size) + ")");
  }
}

double rate_of(double sinr, RateMode mode) {
  return mode == RateMode::exact ? rate_exact(sinr) : rate_hs(sinr);
}

}  // namespace

double uplink_sinr(const Scenario& s, double p_ul_i, std::size_t i) {
  check_index(i, s.num_ul(), "uplink");
  return s.antennas * p_ul_i * s.g_ul[i] / s.noise;
}

double interference_plus_noise(const Scenario& s, std::span<const double> p_ul, std::size_t j) {
  check_index(j, s.num_dl(), "downlink");
  if (p_ul.size() != s.num_ul()) throw std::invalid_argument("uplink power vector size mismatch");
  double acc = 0.0;
  for (std::size_t i : s.nbr.of_dl[j]) acc += s.g_inter(i, j) * p_ul[i];
  return acc + s.noise;
}

double downlink_sinr(const Scenario& s, double p_dl_j, std::span<const double> p_ul,
                     std::size_t j) {
  return s.antennas * p_dl_j * s.g_dl[j] / interference_plus_noise(s, p_ul, j);
}

double rate_exact(double sinr) {
  if (!(sinr >= 0.0)) throw std::domain_error("negative SINR");
  return std::log1p(sinr);
}

double rate_hs(double sinr) {
  if (!(sinr > 0.0)) throw std::domain_error("high-SINR rate needs SINR > 0");
  return std::log(sinr);
}

double sum_utility(const Scenario& s, const Utilities& utils, const PowerAllocation& p,
                   RateMode mode) {
  if (utils.ul.size() != s.num_ul() || utils.dl.size() != s.num_dl()) {
    throw std::invalid_argument("utility assignment does not match scenario size");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < s.num_ul(); ++i) {
    total += utils.ul[i].value(rate_of(uplink_sinr(s, p.p_ul[i], i), mode));
  }
  for (std::size_t j = 0; j < s.num_dl(); ++j) {
    total += utils.dl[j].value(rate_of(downlink_sinr(s, p.p_dl[j], p.p_ul, j), mode));
  }
  return total;
}

}  // namespace fdpc
