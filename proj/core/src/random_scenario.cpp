#include "fdpc/random_scenario.hpp"

#include <cmath>
#include <stdexcept>

#include "fdpc/units.hpp"

namespace fdpc {
namespace {

constexpr std::uint64_t kStreamUl = 0x75'6c;
constexpr std::uint64_t kStreamDl = 0x64'6c;
constexpr std::uint64_t kStreamInter = 0x69'6e'74;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double uniform_db(double lo, double hi, double u) { return lo + (hi - lo) * u; }

}  // namespace

double keyed_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t a,
                     std::uint64_t b) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ stream);
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ (b * 0xD1B54A32D192ED03ULL));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double log_uniform_lower_db(double mean, double span_db) {
  if (!(mean > 0.0)) throw std::invalid_argument("log-uniform mean must be > 0");
  if (span_db == 0.0) return linear_to_db(mean);
  if (!(span_db > 0.0)) throw std::invalid_argument("log-uniform span must be >= 0");
  // E[10^(X/10)] for X ~ U[a, a+s] is 10^(a/10) (10^(s/10) - 1) / (s ln10 / 10).
  const double k = std::log(10.0) / 10.0;
  const double ratio = (std::pow(10.0, span_db / 10.0) - 1.0) / (k * span_db);
  return linear_to_db(mean / ratio);
}

Scenario random_scenario(std::uint64_t seed, std::size_t num_ul, std::size_t num_dl,
                         double antennas, const LossModel& loss) {
  if (num_ul == 0 || num_dl == 0) {
    throw std::invalid_argument("random_scenario: user counts must be positive");
  }
  if (!(antennas >= 1.0)) throw std::invalid_argument("random_scenario: antennas must be >= 1");
  if (loss.g_ul_db_lo > loss.g_ul_db_hi || loss.g_dl_db_lo > loss.g_dl_db_hi) {
    throw std::invalid_argument("random_scenario: empty path-loss range");
  }
  if (loss.inter_mean < 0.0) throw std::invalid_argument("random_scenario: negative mean");

  ScenarioParams params;
  params.antennas = antennas;
  params.noise = loss.noise;
  params.p_ul_max = loss.p_ul_max;
  params.p_dl_total = loss.p_dl_total;
  params.neighbor_threshold = loss.neighbor_threshold;
  params.sigma_min = loss.sigma_min;
  params.g_ul.resize(num_ul);
  params.g_dl.resize(num_dl);
  for (std::size_t i = 0; i < num_ul; ++i) {
    params.g_ul[i] = db_to_linear(
        uniform_db(loss.g_ul_db_lo, loss.g_ul_db_hi, keyed_uniform(seed, kStreamUl, i, 0)));
  }
  for (std::size_t j = 0; j < num_dl; ++j) {
    params.g_dl[j] = db_to_linear(
        uniform_db(loss.g_dl_db_lo, loss.g_dl_db_hi, keyed_uniform(seed, kStreamDl, j, 0)));
  }
  params.g_inter = GainMatrix(num_ul, num_dl, 0.0);
  if (loss.inter_mean > 0.0) {
    const double lo = log_uniform_lower_db(loss.inter_mean, loss.inter_span_db);
    for (std::size_t i = 0; i < num_ul; ++i) {
      for (std::size_t j = 0; j < num_dl; ++j) {
        params.g_inter(i, j) = db_to_linear(
            uniform_db(lo, lo + loss.inter_span_db, keyed_uniform(seed, kStreamInter, i, j)));
      }
    }
  }
  return make_scenario(params);
}

}  // namespace fdpc
