#pragma once

#include <cstddef>
#include <span>

#include "fdpc/scenario.hpp"
#include "fdpc/utility.hpp"

// Asymptotic (M >> K) SINR and rate expressions for the full-duplex cell.
// All functions are pure; index arguments are range-checked and throw
// std::out_of_range.

namespace fdpc {

/// M p g_ul[i] / N0.
double uplink_sinr(const Scenario& s, double p_ul_i, std::size_t i);

/// IN_j = sum over i in N_j of g_I(i, j) p_ul[i], plus N0.
double interference_plus_noise(const Scenario& s, std::span<const double> p_ul, std::size_t j);

/// M p g_dl[j] / IN_j(p_ul).
double downlink_sinr(const Scenario& s, double p_dl_j, std::span<const double> p_ul,
                     std::size_t j);

/// log(1 + sinr), nats.
double rate_exact(double sinr);

/// log(sinr), nats. Throws std::domain_error for sinr <= 0.
double rate_hs(double sinr);

enum class RateMode { exact, high_snr };

/// Sum of per-user utilities of their rates under the chosen rate model.
/// Throws std::domain_error if a utility is evaluated at a nonpositive rate.
double sum_utility(const Scenario& s, const Utilities& utils, const PowerAllocation& p,
                   RateMode mode);

}  // namespace fdpc
