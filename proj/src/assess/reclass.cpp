#include "landcover/assess/reclass.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <unordered_map>

#include <json.hpp>

#include "landcover/core/error.hpp"

namespace landcover::assess {

using reference::ClassCatalog;
namespace id = reference::class_id;

void ReclassTable::validate(const ClassCatalog& catalog) const {
  if (entries.empty()) throw DataError("reclass table '" + legend + "' is empty");
  std::set<int> codes;
  std::set<std::string> names;
  for (const auto& e : entries) {
    if (!codes.insert(e.code).second) throw DataError("reclass table '" + legend + "': duplicate code " + std::to_string(e.code));
    if (!names.insert(e.name).second) throw DataError("reclass table '" + legend + "': duplicate class '" + e.name + "'");
    if (!catalog.contains(e.target))
      throw DataError("reclass table '" + legend + "': unknown target " + std::to_string(e.target));
  }
}

const ReclassEntry* ReclassTable::find_code(int code) const {
  for (const auto& e : entries)
    if (e.code == code) return &e;
  return nullptr;
}

const ReclassEntry& ReclassTable::by_name(std::string_view name) const {
  for (const auto& e : entries)
    if (e.name == name) return e;
  throw DataError("reclass table '" + legend + "' has no class '" + std::string(name) + "'");
}

ReclassTable ReclassTable::identity(const ClassCatalog& catalog) {
  ReclassTable t{"identity", {}};
  for (const auto& c : catalog.classes()) t.entries.push_back({c.id, c.name, c.id});
  return t;
}

namespace {

ReclassTable sequential(std::string legend, std::vector<std::pair<std::string, int>> rows) {
  ReclassTable t{std::move(legend), {}};
  int code = 1;
  for (auto& [name, target] : rows) t.entries.push_back({code++, std::move(name), target});
  return t;
}

ReclassTable from_glc10() {
  return sequential("FROM-GLC10", {{"Cropland", id::cropland},
                                   {"Forest", id::woodland},
                                   {"Grassland", id::grassland},
                                   {"Shrubland", id::shrubland},
                                   {"Wetland", id::wetland},
                                   {"Water", id::water},
                                   {"Tundra", id::grassland},
                                   {"Artificial", id::artificial},
                                   {"Bare land", id::bare},
                                   {"Snow/ice", id::water}});
}

ReclassTable s2glc() {
  return sequential("S2GLC", {{"Artificial surfaces", id::artificial},
                              {"Cultivated areas", id::cropland},
                              {"Vineyards", id::cropland},
                              {"Broadleaf tree cover", id::woodland},
                              {"Coniferous tree cover", id::woodland},
                              {"Herbaceous vegetation", id::grassland},
                              {"Moors and heathlands", id::grassland},
                              {"Sclerophyllous vegetation", id::shrubland},
                              {"Marshes", id::wetland},
                              {"Peatbogs", id::wetland},
                              {"Natural material surfaces", id::bare},
                              {"Permanent snow covered surfaces", id::water},
                              {"Water bodies", id::water}});
}

ReclassTable pflugmacher() {
  return sequential("Pflugmacher", {{"Artificial land", id::artificial},
                                    {"Cropland seasonal", id::cropland},
                                    {"Cropland perennial", id::cropland},
                                    {"Forest broadleaf", id::woodland},
                                    {"Forest coniferous", id::woodland},
                                    {"Forest mixed", id::woodland},
                                    {"Shrubland", id::shrubland},
                                    {"Grassland", id::grassland},
                                    {"Bare land", id::bare},
                                    {"Water", id::water},
                                    {"Wetland", id::wetland},
                                    {"Snow/ice", id::water}});
}

// CORINE level-2 codes, level 3 where the 32x group splits.
ReclassTable corine() {
  return {"CORINE",
          {{11, "Urban fabric", id::artificial},
           {12, "Industrial, commercial, and transport units", id::artificial},
           {13, "Mine, dump, and construction sites", id::bare},
           {14, "Artificial, non-agricultural vegetated areas", id::artificial},
           {21, "Arable land", id::cropland},
           {22, "Permanent crops", id::cropland},
           {23, "Pastures", id::grassland},
           {24, "Heterogeneous agricultural areas", id::cropland},
           {31, "Forests", id::woodland},
           {321, "Natural grasslands", id::grassland},
           {322, "Moors and heathland", id::shrubland},
           {323, "Sclerophyllous vegetation", id::shrubland},
           {324, "Transitional woodland-shrub", id::shrubland},
           {33, "Open spaces with little or no vegetation", id::bare},
           {41, "Inland wetlands", id::wetland},
           {42, "Maritime wetlands", id::wetland},
           {51, "Inland waters", id::water},
           {52, "Marine waters", id::water}}};
}

}  // namespace

std::vector<std::string> builtin_legends() { return {"FROM-GLC10", "S2GLC", "Pflugmacher", "CORINE"}; }

ReclassTable builtin_table(std::string_view legend) {
  if (legend == "FROM-GLC10") return from_glc10();
  if (legend == "S2GLC") return s2glc();
  if (legend == "Pflugmacher") return pflugmacher();
  if (legend == "CORINE") return corine();
  throw ArgumentError("unknown legend '" + std::string(legend) + "'");
}

ReclassTable compose(const ReclassTable& first, const ReclassTable& second) {
  ReclassTable out{first.legend + "+" + second.legend, {}};
  for (const auto& e : first.entries) {
    const auto* next = second.find_code(e.target);
    if (!next) throw DataError("compose: '" + second.legend + "' does not map " + std::to_string(e.target));
    out.entries.push_back({e.code, e.name, next->target});
  }
  return out;
}

Raster reclassify(const Raster& map, const ReclassTable& table) {
  std::unordered_map<long long, int> lookup;
  for (const auto& e : table.entries) lookup.emplace(e.code, e.target);
  Raster out(map.grid(), map.nodata(), map.nodata());
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (!map.valid(i)) continue;
    const double v = map[i];
    const auto code = std::llround(v);
    auto it = lookup.find(code);
    if (static_cast<double>(code) != v || it == lookup.end())
      throw DataError("reclassify: value " + std::to_string(v) + " is not in legend '" + table.legend + "'");
    out[i] = it->second;
  }
  return out;
}

ReclassTable read_reclass_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
    ReclassTable t{j.value("legend", path.stem().string()), {}};
    const auto& catalog = ClassCatalog::standard();
    for (const auto& c : j.at("classes")) {
      const auto& target = c.at("target");
      const int tid = target.is_string() ? catalog.id_of_name(target.get<std::string>()) : target.get<int>();
      t.entries.push_back({c.at("code").get<int>(), c.at("name").get<std::string>(), tid});
    }
    t.validate();
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_reclass_json(const ReclassTable& table, const std::filesystem::path& path) {
  nlohmann::json j;
  j["legend"] = table.legend;
  j["classes"] = nlohmann::json::array();
  const auto& catalog = ClassCatalog::standard();
  for (const auto& e : table.entries)
    j["classes"].push_back({{"code", e.code}, {"name", e.name}, {"target", catalog.by_id(e.target).name}});
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace landcover::assess
