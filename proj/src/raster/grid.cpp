#include "landcover/raster/grid.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "landcover/core/error.hpp"

namespace landcover {

void GridSpec::validate() const {
  if (width <= 0 || height <= 0) throw DataError("grid: width and height must be positive");
  if (!(cell_size > 0.0) || !std::isfinite(cell_size)) throw DataError("grid: cell_size must be positive");
  if (!std::isfinite(origin_x) || !std::isfinite(origin_y)) throw DataError("grid: origin must be finite");
}

std::optional<GridSpec::Cell> GridSpec::locate(double x, double y) const {
  if (!std::isfinite(x) || !std::isfinite(y)) return std::nullopt;
  double fc = std::floor((x - origin_x) / cell_size);
  double fr = std::floor((origin_y - y) / cell_size);
  if (fc < 0 || fr < 0 || fc >= width || fr >= height) return std::nullopt;
  return Cell{static_cast<int>(fr), static_cast<int>(fc)};
}

Raster::Raster(GridSpec grid, double fill, double nodata)
    : grid_(std::move(grid)), values_(grid_.cell_count(), fill), nodata_(nodata) {}

Raster::Raster(GridSpec grid, std::vector<double> values, double nodata)
    : grid_(std::move(grid)), values_(std::move(values)), nodata_(nodata) {
  if (values_.size() != grid_.cell_count())
    throw DataError("raster: dimension mismatch: grid has " + std::to_string(grid_.cell_count()) + " cells, got " +
                    std::to_string(values_.size()) + " values");
}

Date Date::parse(std::string_view text) {
  auto fail = [&] { return DataError("invalid date '" + std::string(text) + "'"); };
  if (text.size() < 10 || text[4] != '-' || text[7] != '-') throw fail();
  if (text.size() > 10 && text[10] != 'T' && text[10] != ' ') throw fail();
  auto number = [&](std::size_t pos, std::size_t len) {
    int v = 0;
    auto res = std::from_chars(text.data() + pos, text.data() + pos + len, v);
    if (res.ec != std::errc() || res.ptr != text.data() + pos + len) throw fail();
    return v;
  };
  Date d{number(0, 4), static_cast<unsigned>(number(5, 2)), static_cast<unsigned>(number(8, 2))};
  std::chrono::year_month_day ymd{std::chrono::year{d.year}, std::chrono::month{d.month}, std::chrono::day{d.day}};
  if (!ymd.ok()) throw fail();
  return d;
}

std::string Date::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", year, month, day);
  return buf;
}

std::string_view sensor_name(Sensor sensor) { return sensor == Sensor::optical ? "optical" : "radar"; }

Sensor parse_sensor(std::string_view name) {
  if (name == "optical") return Sensor::optical;
  if (name == "radar") return Sensor::radar;
  throw DataError("unknown sensor '" + std::string(name) + "'");
}

TimedScene TimedScene::make(GridSpec grid, Date timestamp) {
  TimedScene scene;
  scene.valid_mask.assign(grid.cell_count(), 1);
  scene.grid = std::move(grid);
  scene.timestamp = timestamp;
  return scene;
}

const Raster& TimedScene::band(std::string_view name) const {
  auto it = bands.find(name);
  if (it == bands.end()) throw DataError("scene " + timestamp.to_string() + ": missing band '" + std::string(name) + "'");
  return it->second;
}

void TimedScene::set_band(std::string name, Raster raster) {
  if (!(raster.grid() == grid)) throw DataError("scene: band '" + name + "' grid differs from scene grid");
  bands.insert_or_assign(std::move(name), std::move(raster));
}

void TimedScene::validate() const {
  grid.validate();
  if (valid_mask.size() != grid.cell_count()) throw DataError("scene: valid_mask size differs from grid");
  for (const auto& [name, r] : bands)
    if (!(r.grid() == grid)) throw DataError("scene: band '" + name + "' grid differs from scene grid");
}

const GridSpec& SceneStack::grid() const {
  if (scenes.empty()) throw DataError("stack: empty stack has no grid");
  return scenes.front().grid;
}

void SceneStack::sort_by_time() {
  std::stable_sort(scenes.begin(), scenes.end(),
                   [](const TimedScene& a, const TimedScene& b) { return a.timestamp < b.timestamp; });
}

void SceneStack::validate() const {
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    scenes[i].validate();
    if (!(scenes[i].grid == scenes.front().grid)) throw DataError("stack: scenes do not share one grid");
    if (i > 0 && scenes[i].timestamp < scenes[i - 1].timestamp)
      throw DataError("stack: timestamps are not non-decreasing");
  }
}

}  // namespace landcover
