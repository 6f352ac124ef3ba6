#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "landcover/raster/grid.hpp"

namespace landcover {

enum class Moment { mean, median, std, skewness, kurtosis };

std::string_view moment_name(Moment stat);
Moment parse_moment(std::string_view name);

namespace kernel {

/// Linear interpolation between order statistics at 1-based rank h = (n-1)p + 1.
/// `sorted` must be ascending and non-empty.
double percentile_sorted(std::span<const double> sorted, double p);

/// Population moments over `obs` (reordered in place for the median).
/// std needs n >= 2; skewness (g1) and excess kurtosis (g2) need n >= 4 and
/// non-zero variance.
std::optional<double> moment(std::span<double> obs, Moment stat);

}  // namespace kernel

/// Usable observations of `band` at cell i, in scene order.
void gather_observations(const SceneStack& stack, std::string_view band, std::size_t cell, std::vector<double>& out);

/// Per-cell temporal percentile; nodata where a cell has no observation.
Raster percentile_reduce(const SceneStack& stack, std::string_view band, double p);

/// Several percentiles in one pass over the stack.
std::vector<Raster> percentile_reduce(const SceneStack& stack, std::string_view band, std::span<const double> ps);

Raster moment_reduce(const SceneStack& stack, std::string_view band, Moment stat);

/// Moving-window population standard deviation. Even windows are anchored so
/// that the cell is the upper-left member of the central 2x2 block; the
/// window is clipped at raster edges. Needs >= 2 valid cells per window.
Raster moving_window_std(const Raster& raster, int window = 6);

enum class Resampling { nearest, bilinear };

/// Samples `source` at target cell centres. Bilinear weights of missing
/// neighbours are dropped and the remainder renormalised.
Raster resample_to(const Raster& source, const GridSpec& target, Resampling method);

}  // namespace landcover
