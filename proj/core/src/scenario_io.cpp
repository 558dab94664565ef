#include "fdpc/scenario_io.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>
#include <string>

#include "fdpc/units.hpp"

namespace fdpc {
namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& what) {
  throw std::invalid_argument("scenario json: " + what);
}

std::vector<double> db_vector(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_array()) schema_error(std::string("missing array ") + key);
  std::vector<double> out;
  for (const auto& v : doc[key]) {
    if (!v.is_number()) schema_error(std::string(key) + " must hold numbers");
    out.push_back(db_to_linear(v.get<double>()));
  }
  return out;
}

double power_field(const json& doc, const std::string& stem, bool allow_dbw) {
  if (doc.contains(stem + "_dbm")) return dbm_to_watts(doc[stem + "_dbm"].get<double>());
  if (allow_dbw && doc.contains(stem + "_dbw")) return dbw_to_watts(doc[stem + "_dbw"].get<double>());
  if (doc.contains(stem + "_w")) return doc[stem + "_w"].get<double>();
  schema_error("missing " + stem + "_dbm" + (allow_dbw ? "/_dbw" : "") + "/_w");
}

}  // namespace

Scenario scenario_from_json(const json& doc) {
  if (!doc.is_object()) schema_error("document must be an object");
  ScenarioParams params;
  if (!doc.contains("antennas")) schema_error("missing antennas");
  params.antennas = doc["antennas"].get<double>();
  params.g_ul = db_vector(doc, "g_ul_db");
  params.g_dl = db_vector(doc, "g_dl_db");
  params.g_inter = GainMatrix(params.g_ul.size(), params.g_dl.size(), 0.0);
  if (doc.contains("g_inter_db")) {
    const auto& rows = doc["g_inter_db"];
    if (!rows.is_array() || rows.size() != params.g_ul.size()) {
      schema_error("g_inter_db must have one row per uplink user");
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!rows[i].is_array() || rows[i].size() != params.g_dl.size()) {
        schema_error("g_inter_db rows must have one entry per downlink user");
      }
      for (std::size_t j = 0; j < rows[i].size(); ++j) {
        const auto& v = rows[i][j];
        if (v.is_null()) continue;
        if (!v.is_number()) schema_error("g_inter_db entries must be numbers or null");
        params.g_inter(i, j) = db_to_linear(v.get<double>());
      }
    }
  }
  params.noise = power_field(doc, "n0", true);
  params.p_ul_max = power_field(doc, "p_ul_max", false);
  params.p_dl_total = power_field(doc, "p_dl_tot", false);
  params.neighbor_threshold = db_to_linear(doc.value("neighbor_threshold_db", -100.0));
  params.sigma_min = doc.value("sigma_min", 10.0);

  const bool explicit_floors = doc.contains("p0_ul_w") || doc.contains("p0_dl_w");
  const bool explicit_nbrs = doc.contains("neighbors_of_ul");
  if (!explicit_floors && !explicit_nbrs) return make_scenario(params);

  // Start from the derived scenario but do not validate until overrides land.
  Scenario s;
  s.antennas = params.antennas;
  s.g_ul = params.g_ul;
  s.g_dl = params.g_dl;
  s.g_inter = params.g_inter;
  s.noise = params.noise;
  s.p_ul_max = params.p_ul_max;
  s.p_dl_total = params.p_dl_total;
  s.nbr = build_neighborhoods(s.g_inter, params.neighbor_threshold);
  if (explicit_nbrs) {
    const auto& lists = doc["neighbors_of_ul"];
    if (!lists.is_array() || lists.size() != s.num_ul()) {
      schema_error("neighbors_of_ul must have one list per uplink user");
    }
    Neighborhoods n;
    n.of_ul.resize(s.num_ul());
    n.of_dl.resize(s.num_dl());
    for (std::size_t i = 0; i < lists.size(); ++i) {
      for (const auto& v : lists[i]) {
        const auto j = v.get<std::size_t>();
        if (j >= s.num_dl()) schema_error("neighbor index out of range");
        n.of_ul[i].push_back(j);
      }
      std::sort(n.of_ul[i].begin(), n.of_ul[i].end());
      for (std::size_t j : n.of_ul[i]) n.of_dl[j].push_back(i);
    }
    s.nbr = std::move(n);
  }
  if (explicit_floors) {
    if (!doc.contains("p0_ul_w") || !doc.contains("p0_dl_w")) {
      schema_error("p0_ul_w and p0_dl_w must be given together");
    }
    s.p0_ul = doc["p0_ul_w"].get<std::vector<double>>();
    s.p0_dl = doc["p0_dl_w"].get<std::vector<double>>();
  } else {
    // Neighbors were overridden; recompute floors against them.
    Scenario derived = s;
    derived.p0_ul.assign(s.num_ul(), 0.0);
    derived.p0_dl.assign(s.num_dl(), 0.0);
    for (std::size_t i = 0; i < s.num_ul(); ++i) {
      derived.p0_ul[i] = params.sigma_min * s.noise / (s.antennas * s.g_ul[i]);
    }
    for (std::size_t j = 0; j < s.num_dl(); ++j) {
      double in = s.noise;
      for (std::size_t i : s.nbr.of_dl[j]) in += s.g_inter(i, j) * s.p_ul_max;
      derived.p0_dl[j] = params.sigma_min * in / (s.antennas * s.g_dl[j]);
    }
    s = std::move(derived);
  }
  s.validate();
  return s;
}

json scenario_to_json(const Scenario& s) {
  json doc;
  doc["antennas"] = s.antennas;
  json ul = json::array();
  for (double g : s.g_ul) ul.push_back(linear_to_db(g));
  json dl = json::array();
  for (double g : s.g_dl) dl.push_back(linear_to_db(g));
  doc["g_ul_db"] = ul;
  doc["g_dl_db"] = dl;
  json inter = json::array();
  for (std::size_t i = 0; i < s.num_ul(); ++i) {
    json row = json::array();
    for (double g : s.g_inter.row(i)) {
      row.push_back(g > 0.0 ? json(linear_to_db(g)) : json(nullptr));
    }
    inter.push_back(row);
  }
  doc["g_inter_db"] = inter;
  doc["n0_dbm"] = watts_to_dbm(s.noise);
  doc["p_ul_max_dbm"] = watts_to_dbm(s.p_ul_max);
  doc["p_dl_tot_dbm"] = watts_to_dbm(s.p_dl_total);
  doc["p0_ul_w"] = s.p0_ul;
  doc["p0_dl_w"] = s.p0_dl;
  doc["neighbors_of_ul"] = s.nbr.of_ul;
  return doc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("scenario json: " + std::string(e.what()));
  }
  return scenario_from_json(doc);
}

}  // namespace fdpc
