#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace landcover {

inline constexpr double kDefaultNodata = -9999.0;

/// Regular north-up grid. (origin_x, origin_y) is the upper-left corner;
/// rows grow southwards. Cell (row, col) covers
/// [origin_x + col*cell_size, +cell_size) x (origin_y - (row+1)*cell_size, origin_y - row*cell_size].
struct GridSpec {
  int width = 0;
  int height = 0;
  double origin_x = 0.0;
  double origin_y = 0.0;
  double cell_size = 1.0;
  std::string crs_tag;

  void validate() const;
  std::size_t cell_count() const { return static_cast<std::size_t>(width) * static_cast<std::size_t>(height); }
  double center_x(int col) const { return origin_x + (col + 0.5) * cell_size; }
  double center_y(int row) const { return origin_y - (row + 0.5) * cell_size; }

  struct Cell {
    int row;
    int col;
  };
  /// Cell containing the map coordinate, if any.
  std::optional<Cell> locate(double x, double y) const;

  bool operator==(const GridSpec&) const = default;
};

/// A single-band grid of values. Values are held in double precision in
/// memory; the on-disk payload is 32-bit. A cell is missing when it equals
/// the nodata sentinel or is NaN.
class Raster {
 public:
  Raster() = default;
  explicit Raster(GridSpec grid, double fill = kDefaultNodata, double nodata = kDefaultNodata);
  Raster(GridSpec grid, std::vector<double> values, double nodata = kDefaultNodata);

  const GridSpec& grid() const { return grid_; }
  int width() const { return grid_.width; }
  int height() const { return grid_.height; }
  std::size_t size() const { return values_.size(); }
  double nodata() const { return nodata_; }

  double at(int row, int col) const { return values_[index(row, col)]; }
  double& at(int row, int col) { return values_[index(row, col)]; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  bool is_missing_value(double v) const { return v != v || v == nodata_; }
  bool valid(std::size_t i) const { return !is_missing_value(values_[i]); }
  bool valid(int row, int col) const { return valid(index(row, col)); }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(grid_.width) + static_cast<std::size_t>(col);
  }

  bool operator==(const Raster&) const = default;

 private:
  GridSpec grid_;
  std::vector<double> values_;
  double nodata_ = kDefaultNodata;
};

struct Date {
  int year = 1970;
  unsigned month = 1;
  unsigned day = 1;

  /// Accepts "YYYY-MM-DD" optionally followed by a time part ("T..." or " ...").
  static Date parse(std::string_view text);
  std::string to_string() const;

  auto operator<=>(const Date&) const = default;
};

enum class Sensor { optical, radar };

std::string_view sensor_name(Sensor sensor);
Sensor parse_sensor(std::string_view name);

/// One acquisition: named bands on a shared grid plus a validity mask
/// (1 = usable observation).
struct TimedScene {
  GridSpec grid;
  Date timestamp;
  std::map<std::string, Raster, std::less<>> bands;
  std::vector<std::uint8_t> valid_mask;
  std::map<std::string, std::string, std::less<>> metadata;

  /// Scene with no bands and an all-valid mask.
  static TimedScene make(GridSpec grid, Date timestamp);

  bool has_band(std::string_view name) const { return bands.find(name) != bands.end(); }
  const Raster& band(std::string_view name) const;
  void set_band(std::string name, Raster raster);

  /// True when cell i is unmasked and the band holds a value there.
  bool observed(const Raster& band, std::size_t i) const { return valid_mask[i] != 0 && band.valid(i); }

  void validate() const;
};

struct SceneStack {
  Sensor sensor = Sensor::optical;
  std::vector<TimedScene> scenes;

  bool empty() const { return scenes.empty(); }
  std::size_t size() const { return scenes.size(); }
  const GridSpec& grid() const;

  /// Sorts scenes by timestamp (stable).
  void sort_by_time();
  void validate() const;
};

}  // namespace landcover
