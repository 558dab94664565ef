#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "fdpc/scenario.hpp"

namespace fdpc {

/// Broadcast by downlink user j once per round. fb = q_j / IN_j.
///
/// Wire layout, little-endian:
///   u32 sender | f64 fb | u32 n | n x (u32 uplink index | f64 gain)
/// The downlink pilot gain is measured by the BS and is not on the wire.
struct FeedbackMsg {
  std::uint32_t sender = 0;
  double fb = 0.0;
  double pilot_gain_to_bs = 0.0;
  std::vector<std::pair<std::uint32_t, double>> pilot_gain_to_ul;  // ascending index

  bool operator==(const FeedbackMsg&) const = default;
};

/// Pilot gains are taken from the scenario (perfect estimation). Throws
/// std::invalid_argument unless q_dl_j > 0 and in_j >= N0.
FeedbackMsg make_feedback(std::size_t j, double q_dl_j, double in_j, const Scenario& s);

/// fb M p g / q, which equals M p g / IN_j.
double bs_recover_sinr(const FeedbackMsg& msg, double p_dl_j, double q_dl_j, double antennas);

struct OverheardMetric {
  double m = 0.0;              // fb g_ij = q_j g_ij / IN_j
  double weighted_term = 0.0;  // m P_i
};

/// Throws std::invalid_argument if uplink user i is not among the sender's
/// overhearing neighbors.
OverheardMetric ul_overhear_metric(const FeedbackMsg& msg, std::size_t i, double p_ul_i);

std::vector<std::uint8_t> encode(const FeedbackMsg& msg);

/// Throws std::invalid_argument on truncated or trailing bytes.
FeedbackMsg decode(std::span<const std::uint8_t> bytes, double pilot_gain_to_bs = 0.0);

}  // namespace fdpc
