#include "fdpc/feedback.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <stdexcept>
#include <string>

namespace fdpc {

FeedbackMsg make_feedback(std::size_t j, double q_dl_j, double in_j, const Scenario& s) {
  if (j >= s.num_dl()) throw std::out_of_range("make_feedback: downlink index");
  if (!(q_dl_j > 0.0)) throw std::invalid_argument("make_feedback: price must be > 0");
  if (!(in_j >= s.noise) || !(in_j > 0.0)) {
    throw std::invalid_argument("make_feedback: IN below the noise floor");
  }
  FeedbackMsg msg;
  msg.sender = static_cast<std::uint32_t>(j);
  msg.fb = q_dl_j / in_j;
  msg.pilot_gain_to_bs = s.g_dl[j];
  for (std::size_t i : s.nbr.of_dl[j]) {
    msg.pilot_gain_to_ul.emplace_back(static_cast<std::uint32_t>(i), s.g_inter(i, j));
  }
  return msg;
}

double bs_recover_sinr(const FeedbackMsg& msg, double p_dl_j, double q_dl_j, double antennas) {
  return msg.fb * antennas * p_dl_j * msg.pilot_gain_to_bs / q_dl_j;
}

OverheardMetric ul_overhear_metric(const FeedbackMsg& msg, std::size_t i, double p_ul_i) {
  const auto it = std::lower_bound(
      msg.pilot_gain_to_ul.begin(), msg.pilot_gain_to_ul.end(), i,
      [](const std::pair<std::uint32_t, double>& e, std::size_t k) { return e.first < k; });
  if (it == msg.pilot_gain_to_ul.end() || it->first != i) {
    throw std::invalid_argument("ul_overhear_metric: uplink user " + std::to_string(i) +
                                " does not overhear downlink user " + std::to_string(msg.sender));
  }
  OverheardMetric out;
  out.m = msg.fb * it->second;
  out.weighted_term = out.m * p_ul_i;
  return out;
}

namespace {


template <typename T>
void put(std::vector<std::uint8_t>& out, T value) {
  std::uint8_t raw[sizeof(T)];
  std::memcpy(raw, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
  out.insert(out.end(), raw, raw + sizeof(T));
}

template <typename T>
T take(std::span<const std::uint8_t> bytes, std::size_t& pos) {
  if (bytes.size() - pos < sizeof(T)) throw std::invalid_argument("decode: truncated message");
  std::uint8_t raw[sizeof(T)];
  std::memcpy(raw, bytes.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
  pos += sizeof(T);
  T value;
  std::memcpy(&value, raw, sizeof(T));
  return value;
}

}  // namespace

std::vector<std::uint8_t> encode(const FeedbackMsg& msg) {
  std::vector<std::uint8_t> out;
  out.reserve(16 + 12 * msg.pilot_gain_to_ul.size());
  put<std::uint32_t>(out, msg.sender);
  put<double>(out, msg.fb);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(msg.pilot_gain_to_ul.size()));
  for (const auto& [idx, gain] : msg.pilot_gain_to_ul) {
    put<std::uint32_t>(out, idx);
    put<double>(out, gain);
  }
  return out;
}

FeedbackMsg decode(std::span<const std::uint8_t> bytes, double pilot_gain_to_bs) {
  std::size_t pos = 0;
  FeedbackMsg msg;
  msg.sender = take<std::uint32_t>(bytes, pos);
  msg.fb = take<double>(bytes, pos);
  const auto n = take<std::uint32_t>(bytes, pos);
  if ((bytes.size() - pos) / 12 < n) throw std::invalid_argument("decode: truncated message");
  msg.pilot_gain_to_ul.reserve(n);
  for (std::uint32_t k = 0; k < n; ++k) {
    const auto idx = take<std::uint32_t>(bytes, pos);
    const auto gain = take<double>(bytes, pos);
    msg.pilot_gain_to_ul.emplace_back(idx, gain);
  }
  if (pos != bytes.size()) throw std::invalid_argument("decode: trailing bytes");
  msg.pilot_gain_to_bs = pilot_gain_to_bs;
  return msg;
}

}  // namespace fdpc
