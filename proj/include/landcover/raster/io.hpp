#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "landcover/raster/grid.hpp"

namespace landcover {

// Canonical tile: "<stem>.json" header
//   {width, height, origin_x, origin_y, cell_size, crs_tag, nodata, timestamp?, metadata{}}
// and "<stem>.bin" payload of row-major little-endian IEEE-754 binary32.

struct Tile {
  Raster raster;
  std::optional<Date> timestamp;
  std::map<std::string, std::string, std::less<>> metadata;
};

/// Payload path paired with a header path.
std::filesystem::path payload_path(const std::filesystem::path& header);

Raster read_raster(const std::filesystem::path& header);
void write_raster(const Raster& raster, const std::filesystem::path& header);

Tile read_tile(const std::filesystem::path& header);
void write_tile(const Tile& tile, const std::filesystem::path& header);

// Stack directory: manifest.json
//   {sensor, bands[], scenes[{id, timestamp, metadata{}, bands{name: header}, mask?: header}]}
// Mask tiles hold 1 for valid and 0 for masked cells.
SceneStack read_stack(const std::filesystem::path& dir);
void write_stack(const SceneStack& stack, const std::filesystem::path& dir);

}  // namespace landcover
