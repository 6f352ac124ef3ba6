#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace landcover::assess {

struct ValidationSample {
  double x = 0;
  double y = 0;
  int predicted = 0;
  int reference = 0;
};

struct GridAccuracyCell {
  std::int64_t col = 0;  // floor(x / cell_size)
  std::int64_t row = 0;  // floor(y / cell_size)
  double min_x = 0, min_y = 0, max_x = 0, max_y = 0;
  std::size_t samples = 0;
  std::size_t reference_classes = 0;
  std::optional<double> oa;  // percent; absent when ineligible
  bool eligible() const { return oa.has_value(); }
};

inline constexpr double kHistogramBinWidth = 5.0;
inline constexpr std::size_t kHistogramBins = 20;

struct GridAccuracyResult {
  std::vector<GridAccuracyCell> cells;  // sorted by (row, col)
  /// Eligible-cell counts per 5 pp OA bin; 100% falls in the last bin.
  std::array<std::size_t, kHistogramBins> histogram{};
  std::size_t eligible = 0;
};

GridAccuracyResult grid_accuracy(std::span<const ValidationSample> samples, double cell_size, std::size_t min_n = 20);

std::vector<ValidationSample> read_validation_csv(const std::filesystem::path& path);
void write_grid_csv(const GridAccuracyResult& result, const std::filesystem::path& path);
void write_histogram_csv(const GridAccuracyResult& result, const std::filesystem::path& path);

}  // namespace landcover::assess
