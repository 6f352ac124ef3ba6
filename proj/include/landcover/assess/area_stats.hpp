#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "landcover/raster/grid.hpp"
#include "landcover/reference/catalog.hpp"

namespace landcover::assess {

struct ReferenceSample {
  double x = 0;
  double y = 0;
  int class_id = 0;
};

struct UnitProportions {
  long long unit_id = 0;
  std::size_t valid_cells = 0;
  std::size_t points = 0;
  std::vector<double> mapped;     // catalog order
  std::vector<double> reference;  // catalog order
};

struct LinearFit {
  double intercept = 0;
  double slope = 0;
  double r2 = 0;
};

struct AreaStatsReport {
  std::vector<UnitProportions> units;  // ascending unit id
  std::size_t excluded_no_valid_cells = 0;
  std::size_t excluded_no_points = 0;
  /// OLS of mapped on reference proportions pooled over units x classes.
  LinearFit pooled;
  double rmse = 0;
  double mae = 0;
  std::vector<std::optional<LinearFit>> per_class;  // absent when reference has no spread
};

std::optional<LinearFit> ols(std::span<const double> x, std::span<const double> y);

AreaStatsReport area_stats(const Raster& map, const Raster& units, std::span<const ReferenceSample> points,
                           const reference::ClassCatalog& catalog = reference::ClassCatalog::standard());

void write_area_stats_csv(const AreaStatsReport& report, const std::filesystem::path& path,
                          const reference::ClassCatalog& catalog = reference::ClassCatalog::standard());

}  // namespace landcover::assess
