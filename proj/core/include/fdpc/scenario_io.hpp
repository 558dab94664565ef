#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "fdpc/scenario.hpp"

// JSON scenario documents. Field names carry their unit:
//
//   {
//     "antennas": 128,
//     "g_ul_db": [-50, -45],
//     "g_dl_db": [-56, -61, -65, -58],
//     "g_inter_db": [[-59, -60, null, null], [-62, -55, null, null]],
//     "n0_dbm": -90,                 (or "n0_dbw")
//     "p_ul_max_dbm": 23,            (or "p_ul_max_w")
//     "p_dl_tot_dbm": 45,            (or "p_dl_tot_w")
//     "neighbor_threshold_db": -100, (optional, default -100)
//     "sigma_min": 10,               (optional, default 10)
//     "p0_ul_w": [...], "p0_dl_w": [...],   (optional explicit floors)
//     "neighbors_of_ul": [[0, 1], [0, 1]]   (optional explicit sets)
//   }
//
// null interference entries mean zero gain.

namespace fdpc {

Scenario scenario_from_json(const nlohmann::json& doc);

/// Writes gains in dB, powers in dBm and the derived floors and neighbor
/// sets explicitly, so loading the output reproduces the scenario.
nlohmann::json scenario_to_json(const Scenario& s);

Scenario load_scenario(const std::filesystem::path& path);

}  // namespace fdpc
