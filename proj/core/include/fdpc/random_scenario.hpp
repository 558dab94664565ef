#pragma once

#include <cstddef>
#include <cstdint>

#include "fdpc/scenario.hpp"

namespace fdpc {

/// Path-loss and interference distribution for generated cells.
///
/// Gains are drawn uniformly in dB. Interference gains are log-uniform over
/// [lo, lo + inter_span_db] with lo chosen so that the linear mean equals
/// inter_mean; inter_mean == 0 produces an interference-free cell.
struct LossModel {
  double g_ul_db_lo = -70.0;
  double g_ul_db_hi = -50.0;
  double g_dl_db_lo = -70.0;
  double g_dl_db_hi = -50.0;
  double inter_mean = 7.5e-13;  // linear
  double inter_span_db = 10.0;
  double noise = 1e-12;         // W (-90 dBm)
  double p_ul_max = 0.19952623149688797;  // 23 dBm
  double p_dl_total = 31.622776601683793; // 45 dBm
  double neighbor_threshold = 1e-20;      // -200 dB
  double sigma_min = 10.0;
};

/// Lower edge (dB) of a log-uniform range of the given width whose linear
/// mean is `mean`.
double log_uniform_lower_db(double mean, double span_db);

/// Deterministic in (seed, user index): the gain of uplink user i, downlink
/// user j and pair (i, j) does not depend on K_ul, K_dl or M, so scenarios
/// drawn with the same seed and growing sizes are nested.
Scenario random_scenario(std::uint64_t seed, std::size_t num_ul, std::size_t num_dl,
                         double antennas, const LossModel& loss);

/// Uniform [0, 1) draw keyed by (seed, stream, a, b). Exposed for tests.
double keyed_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t a,
                     std::uint64_t b);

}  // namespace fdpc
