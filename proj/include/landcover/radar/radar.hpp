#pragma once

#include <string_view>
#include <vector>

#include "landcover/features/feature_cube.hpp"
#include "landcover/raster/grid.hpp"

namespace landcover::radar {

inline constexpr std::string_view kVV = "vv";
inline constexpr std::string_view kVH = "vh";
inline constexpr std::string_view kOrbitModeKey = "orbit_mode";

/// Sigma-range speckle filter parameters (linear power input).
struct SigmaFilterConfig {
  int window = 7;
  double enl = 4.0;
  double k_sigma = 2.0;
  int min_selected = 3;

  void validate() const;
};

/// Per valid cell: m = mean of valid window cells; output the mean of the
/// window cells within [m(1 - k/sqrt(enl)), m(1 + k/sqrt(enl))], or the
/// window median when fewer than min_selected qualify. Unobserved cells
/// (mask 0 or nodata) are excluded from windows and passed through.
Raster sigma_filter(const Raster& band, const std::vector<std::uint8_t>& valid_mask, const SigmaFilterConfig& cfg);

/// Filters every band of the scene.
TimedScene sigma_filter(const TimedScene& scene, const SigmaFilterConfig& cfg);

enum class OrbitMode { asc, desc };

std::string_view orbit_name(OrbitMode mode);
OrbitMode orbit_of(const TimedScene& scene);

struct RadarFeatureOptions {
  SigmaFilterConfig filter;
  bool speckle_filter = true;
};

/// Median and std of vv, vh and the per-scene vv/vh ratio for each orbit
/// mode: <asc|desc>_<vv|vh|vvvh>_<med|std>. A missing orbit mode is filled
/// with copies of the present mode's layers, recorded in copied_from.
features::FeatureCube radar_feature_set(const SceneStack& stack, const RadarFeatureOptions& options = {});

}  // namespace landcover::radar
