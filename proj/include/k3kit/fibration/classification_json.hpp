#pragma once

// Pulled in only by translation units that already speak JSON (the CLI, the
// table generator, the data-file test); the core headers stay free of the
// dependency.

#include <json.hpp>

#include "k3kit/fibration/classification.hpp"

namespace k3kit {

inline nlohmann::ordered_json extremal_row_to_json(const ExtremalRow& r) {
  nlohmann::ordered_json j;
  j["fibers"] = r.fibers;
  j["mw_group"] = r.mw_group;
  j["mw_order"] = r.mw_order;
  j["char_not"] = r.char_not;
  j["char_only"] = r.char_only;
  j["isogeny_class"] = r.isogeny_class;
  j["semistable"] = r.semistable;
  j["locations"] = r.locations;
  j["note"] = r.note;
  return j;
}

inline nlohmann::ordered_json extremal_table_to_json() {
  nlohmann::ordered_json j;
  j["table_version"] = extremal_table_version;
  j["rows"] = nlohmann::ordered_json::array();
  for (const ExtremalRow& r : extremal_table())
    j["rows"].push_back(extremal_row_to_json(r));
  return j;
}

inline ExtremalRow extremal_row_from_json(const nlohmann::ordered_json& j) {
  ExtremalRow r;
  r.fibers = j.at("fibers").get<std::vector<std::string>>();
  r.mw_group = j.at("mw_group").get<std::string>();
  r.mw_order = j.at("mw_order").get<long>();
  r.char_not = j.at("char_not").get<std::vector<long>>();
  r.char_only = j.at("char_only").get<long>();
  r.isogeny_class = j.at("isogeny_class").get<int>();
  r.semistable = j.at("semistable").get<bool>();
  r.locations = j.at("locations").get<std::string>();
  r.note = j.at("note").get<std::string>();
  return r;
}

inline std::vector<ExtremalRow>
extremal_table_from_json(const nlohmann::ordered_json& j) {
  if (j.at("table_version").get<int>() != extremal_table_version)
    throw k3_error("extremal_table_from_json: table_version mismatch");
  std::vector<ExtremalRow> rows;
  for (const auto& rj : j.at("rows")) rows.push_back(extremal_row_from_json(rj));
  return rows;
}

} // namespace k3kit
