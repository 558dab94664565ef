#include "fdpc/presets.hpp"

#include <stdexcept>

#include "fdpc/units.hpp"

namespace fdpc {

Utilities Preset::utilities() const {
  return Utilities::uniform(params.g_ul.size(), params.g_dl.size(), ul_fn, dl_fn);
}

namespace {

ScenarioParams common(double antennas) {
  ScenarioParams p;
  p.antennas = antennas;
  p.noise = dbm_to_watts(-90.0);
  p.p_ul_max = dbm_to_watts(23.0);
  p.p_dl_total = dbm_to_watts(45.0);
  p.sigma_min = 10.0;
  return p;
}

ScenarioParams two_user() {
  ScenarioParams p = common(128.0);
  p.g_ul = {db_to_linear(-60.0)};
  p.g_dl = {db_to_linear(-70.0)};
  p.g_inter = GainMatrix(1, 1, 0.0);
  p.neighbor_threshold = db_to_linear(-200.0);
  return p;
}

ScenarioParams six_user() {
  ScenarioParams p = common(128.0);
  p.g_ul = {db_to_linear(-50.0), db_to_linear(-45.0)};
  p.g_dl = {db_to_linear(-56.0), db_to_linear(-61.0), db_to_linear(-65.0), db_to_linear(-58.0)};
  p.g_inter = GainMatrix(2, 4, 0.0);
  p.g_inter(0, 0) = db_to_linear(-59.0);
  p.g_inter(0, 1) = db_to_linear(-60.0);
  p.g_inter(1, 0) = db_to_linear(-62.0);
  p.g_inter(1, 1) = db_to_linear(-55.0);
  p.neighbor_threshold = db_to_linear(-100.0);
  return p;
}

}  // namespace

Preset preset(std::string_view name) {
  Preset p;
  p.name = std::string(name);
  if (name == "fig2-pf") {
    p.params = two_user();
    p.ul_fn = UtilityFn::log(1.0);
    p.dl_fn = UtilityFn::log(2.0);
  } else if (name == "fig2-mpd") {
    p.params = two_user();
    p.ul_fn = UtilityFn::alpha_fair(2.0, 1.0);
    p.dl_fn = UtilityFn::alpha_fair(2.0, 2.0);
  } else if (name == "fig3-pf") {
    p.params = six_user();
    p.ul_fn = p.dl_fn = UtilityFn::log(1.0);
  } else if (name == "fig3-mpd") {
    p.params = six_user();
    p.ul_fn = p.dl_fn = UtilityFn::alpha_fair(2.0, 1.0);
  } else {
    throw std::invalid_argument("unknown preset: " + std::string(name));
  }
  return p;
}

std::vector<std::string> preset_names() { return {"fig2-pf", "fig2-mpd", "fig3-pf", "fig3-mpd"}; }

LossModel scaling_loss_model() {
  LossModel m;
  m.inter_mean = db_to_linear(-121.0);
  m.inter_span_db = 10.0;
  m.neighbor_threshold = db_to_linear(-200.0);
  return m;
}

}  // namespace fdpc
