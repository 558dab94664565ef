#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fdpc/distpc.hpp"
#include "fdpc/experiments.hpp"
#include "fdpc/scenario.hpp"
#include "fdpc/utility.hpp"

// Named parameter sets. Path losses and power limits in the scenario
// documents are stated in dB / dBm; N0 is -90 dBm throughout.

namespace fdpc {

struct Preset {
  std::string name;
  ScenarioParams params;
  UtilityFn ul_fn = UtilityFn::log();
  UtilityFn dl_fn = UtilityFn::log();

  Scenario scenario() const { return make_scenario(params); }
  Utilities utilities() const;
};

/// fig2-pf, fig2-mpd (1 x 1, interference gain unset), fig3-pf, fig3-mpd.
/// Throws std::invalid_argument for unknown names.
Preset preset(std::string_view name);
std::vector<std::string> preset_names();

/// Interference range of the 1 x 1 sweep.
struct SweepRange {
  double lo_db = -140.0;
  double hi_db = -60.0;
  int points = 30;

  std::vector<double> values() const { return linspace(lo_db, hi_db, points); }
};

/// Cell statistics of the scaling study.
LossModel scaling_loss_model();

}  // namespace fdpc
