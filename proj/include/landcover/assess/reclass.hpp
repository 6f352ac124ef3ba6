#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "landcover/raster/grid.hpp"
#include "landcover/reference/catalog.hpp"

namespace landcover::assess {

struct ReclassEntry {
  int code = 0;        // raster value in the source legend
  std::string name;    // source class name
  int target = 0;      // class id
};

struct ReclassTable {
  std::string legend;
  std::vector<ReclassEntry> entries;

  /// Codes and names unique, targets known to the catalog.
  void validate(const reference::ClassCatalog& catalog = reference::ClassCatalog::standard()) const;
  const ReclassEntry* find_code(int code) const;
  const ReclassEntry& by_name(std::string_view name) const;

  static ReclassTable identity(const reference::ClassCatalog& catalog = reference::ClassCatalog::standard());
};

/// Built-in lookup tables: "FROM-GLC10", "S2GLC", "Pflugmacher", "CORINE".
ReclassTable builtin_table(std::string_view legend);
std::vector<std::string> builtin_legends();

/// Applies `second` to the targets of `first`.
ReclassTable compose(const ReclassTable& first, const ReclassTable& second);

Raster reclassify(const Raster& map, const ReclassTable& table);

// {"legend": "...", "classes": [{"code": 1, "name": "...", "target": "Wetland" | 7}]}
ReclassTable read_reclass_json(const std::filesystem::path& path);
void write_reclass_json(const ReclassTable& table, const std::filesystem::path& path);

}  // namespace landcover::assess
