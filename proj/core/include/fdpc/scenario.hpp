#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fdpc {

/// Dense row-major K_ul x K_dl matrix of inter-node interference gains
/// (uplink transmitter i -> downlink receiver j), linear.
class GainMatrix {
 public:
  GainMatrix() = default;
  GainMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(data_).subspan(i * cols_, cols_);
  }

  double max_entry() const;

  bool operator==(const GainMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Neighbor sets in both directions: of_ul[i] lists downlink users hit by
/// uplink user i, of_dl[j] lists uplink users interfering at downlink user j.
/// Both are sorted ascending.
struct Neighborhoods {
  std::vector<std::vector<std::size_t>> of_ul;
  std::vector<std::vector<std::size_t>> of_dl;

  std::size_t link_count() const;
  bool operator==(const Neighborhoods&) const = default;
};

/// j in of_ul[i] iff gains(i, j) >= threshold.
Neighborhoods build_neighborhoods(const GainMatrix& gains, double threshold);

/// Single-cell full-duplex scenario. All quantities linear (watts, gains).
struct Scenario {
  double antennas = 1.0;  // M
  std::vector<double> g_ul;
  std::vector<double> g_dl;
  GainMatrix g_inter;
  double noise = 0.0;  // N0, watts
  double p_ul_max = 0.0;
  double p_dl_total = 0.0;
  std::vector<double> p0_ul;
  std::vector<double> p0_dl;
  Neighborhoods nbr;

  std::size_t num_ul() const { return g_ul.size(); }
  std::size_t num_dl() const { return g_dl.size(); }

  /// Throws std::invalid_argument describing the first violated invariant.
  void validate() const;
};

/// Inputs from which a Scenario is derived: neighborhoods come from the
/// threshold and the high-SINR floors from sigma_min.
struct ScenarioParams {
  double antennas = 128.0;
  std::vector<double> g_ul;
  std::vector<double> g_dl;
  GainMatrix g_inter;
  double noise = 1e-12;
  double p_ul_max = 0.0;
  double p_dl_total = 0.0;
  double neighbor_threshold = 1e-10;  // -100 dB
  double sigma_min = 10.0;
};

/// P0_ul[i] = sigma_min N0 / (M g_ul[i]);
/// P0_dl[j] = sigma_min IN_j(all uplink at P_max) / (M g_dl[j]).
/// The result is validated.
Scenario make_scenario(const ScenarioParams& params);

/// Uplink and downlink transmit powers, watts.
struct PowerAllocation {
  std::vector<double> p_ul;
  std::vector<double> p_dl;
};

/// Log-power view (P-hat = log P) used by the convex formulation.
struct LogPowers {
  std::vector<double> ul;
  std::vector<double> dl;

  static LogPowers from(const PowerAllocation& p);
  PowerAllocation to_linear() const;
};

/// Bounds plus budget, with relative slack on the sum.
bool is_feasible(const Scenario& s, const PowerAllocation& p, double rel_tol = 1e-9);

}  // namespace fdpc
