#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "landcover/features/feature_cube.hpp"
#include "landcover/raster/grid.hpp"

namespace landcover::optical {

// Band names expected in optical scenes. Sentinel-2 tiles map B2, B3, B4,
// B8, B11, B12 onto these; cloud_prob is a 0-100 probability band.
inline constexpr std::string_view kBlue = "blue";
inline constexpr std::string_view kGreen = "green";
inline constexpr std::string_view kRed = "red";
inline constexpr std::string_view kNir = "nir";
inline constexpr std::string_view kSwir1 = "swir1";
inline constexpr std::string_view kSwir2 = "swir2";
inline constexpr std::string_view kCloudProb = "cloud_prob";

inline constexpr std::string_view kCloudFractionKey = "cloudy_pixel_fraction";

enum class SpectralIndex { ndvi, nbr, ndbi, ndsi };

std::string_view index_name(SpectralIndex index);
SpectralIndex parse_index(std::string_view name);
const std::vector<SpectralIndex>& all_indices();

enum class Season { spring, summer, fall, winter };

std::string_view season_name(Season season);
/// Meteorological seasons; winter is Dec-Feb.
Season season_of_month(unsigned month);

struct CloudFilterResult {
  SceneStack stack;
  std::size_t rejected_cloudy = 0;
  std::size_t rejected_missing_metadata = 0;
};

/// Keeps scenes whose cloudy_pixel_fraction is strictly below max_fraction.
CloudFilterResult scene_cloud_filter(const SceneStack& stack, double max_fraction = 0.60);

/// Clears the valid mask where cloud_prob >= threshold (percent).
TimedScene mask_clouds(const TimedScene& scene, double threshold = 40.0);
SceneStack mask_clouds(const SceneStack& stack, double threshold = 40.0);

/// Normalized-difference index of one scene; nodata where an input is
/// unobserved or the denominator is zero.
Raster spectral_index(const TimedScene& scene, SpectralIndex index);

/// One derived band (named after the index) per scene.
SceneStack index_stack(const SceneStack& stack, SpectralIndex index);

/// Median index over the scenes whose month falls in `season`.
Raster seasonal_median(const SceneStack& stack, SpectralIndex index, Season season);

struct OpticalConfig {
  std::vector<std::string> bands = {"blue", "green", "red", "nir", "swir1", "swir2"};
  std::vector<SpectralIndex> indices = {SpectralIndex::ndvi, SpectralIndex::nbr, SpectralIndex::ndbi,
                                        SpectralIndex::ndsi};
  std::vector<double> percentiles = {0.05, 0.25, 0.50, 0.75, 0.95};
  bool seasonal_ndvi = true;
  bool ndvi_texture = true;
  int texture_window = 6;
};

/// Layer names: <band>_med; <index>_pNN, <index>_std, <index>_kurt,
/// <index>_skew; ndvi_med_<season>; ndvi_texture. Seasonal and texture
/// layers need NDVI among the indices.
features::FeatureCube optical_feature_set(const SceneStack& stack, const OpticalConfig& config = {});

}  // namespace landcover::optical
