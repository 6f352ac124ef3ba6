#include "landcover/optical/optical.hpp"

#include <cmath>
#include <cstdio>

#include <spdlog/spdlog.h>

#include "landcover/core/csv.hpp"
#include "landcover/core/error.hpp"
#include "landcover/raster/reducers.hpp"

namespace landcover::optical {

std::string_view index_name(SpectralIndex index) {
  switch (index) {
    case SpectralIndex::ndvi: return "ndvi";
    case SpectralIndex::nbr: return "nbr";
    case SpectralIndex::ndbi: return "ndbi";
    case SpectralIndex::ndsi: return "ndsi";
  }
  return "";
}

const std::vector<SpectralIndex>& all_indices() {
  static const std::vector<SpectralIndex> all = {SpectralIndex::ndvi, SpectralIndex::nbr, SpectralIndex::ndbi,
                                                 SpectralIndex::ndsi};
  return all;
}

SpectralIndex parse_index(std::string_view name) {
  for (SpectralIndex i : all_indices())
    if (index_name(i) == name) return i;
  throw ArgumentError("unknown spectral index '" + std::string(name) + "'");
}

std::string_view season_name(Season season) {
  switch (season) {
    case Season::spring: return "spring";
    case Season::summer: return "summer";
    case Season::fall: return "fall";
    case Season::winter: return "winter";
  }
  return "";
}

Season season_of_month(unsigned month) {
  if (month < 1 || month > 12) throw ArgumentError("month out of range");
  if (month == 12 || month <= 2) return Season::winter;
  if (month <= 5) return Season::spring;
  if (month <= 8) return Season::summer;
  return Season::fall;
}

CloudFilterResult scene_cloud_filter(const SceneStack& stack, double max_fraction) {
  CloudFilterResult result;
  result.stack.sensor = stack.sensor;
  for (const auto& scene : stack.scenes) {
    auto it = scene.metadata.find(kCloudFractionKey);
    if (it == scene.metadata.end()) {
      ++result.rejected_missing_metadata;
      spdlog::warn("scene {} has no {}; rejected", scene.timestamp.to_string(), kCloudFractionKey);
      continue;
    }
    double fraction;
    try {
      fraction = csv::parse_double(it->second, kCloudFractionKey);
    } catch (const DataError&) {
      ++result.rejected_missing_metadata;
      spdlog::warn("scene {} has unparseable {} '{}'; rejected", scene.timestamp.to_string(), kCloudFractionKey,
                   it->second);
      continue;
    }
    if (fraction < max_fraction) {
      result.stack.scenes.push_back(scene);
    } else {
      ++result.rejected_cloudy;
    }
  }
  return result;
}

TimedScene mask_clouds(const TimedScene& scene, double threshold) {
  const Raster& prob = scene.band(kCloudProb);
  TimedScene out = scene;
  for (std::size_t i = 0; i < prob.size(); ++i)
    if (prob.valid(i) && prob[i] >= threshold) out.valid_mask[i] = 0;
  return out;
}

SceneStack mask_clouds(const SceneStack& stack, double threshold) {
  SceneStack out;
  out.sensor = stack.sensor;
  out.scenes.reserve(stack.size());
  for (const auto& s : stack.scenes) out.scenes.push_back(mask_clouds(s, threshold));
  return out;
}

namespace {

struct IndexBands {
  std::string_view a;
  std::string_view b;
};

// index = (a - b) / (a + b)
IndexBands bands_of(SpectralIndex index) {
  switch (index) {
    case SpectralIndex::ndvi: return {kNir, kRed};
    case SpectralIndex::nbr: return {kNir, kSwir2};
    case SpectralIndex::ndbi: return {kSwir1, kNir};
    case SpectralIndex::ndsi: return {kGreen, kSwir1};
  }
  return {};
}

std::string percentile_label(double p) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "p%02d", static_cast<int>(std::lround(p * 100.0)));
  return buf;
}

}  // namespace

Raster spectral_index(const TimedScene& scene, SpectralIndex index) {
  const auto [na, nb] = bands_of(index);
  const Raster& a = scene.band(na);
  const Raster& b = scene.band(nb);
  Raster out(scene.grid);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!scene.observed(a, i) || !scene.observed(b, i)) continue;
    const double den = a[i] + b[i];
    if (den == 0.0) continue;
    out[i] = (a[i] - b[i]) / den;
  }
  return out;
}

SceneStack index_stack(const SceneStack& stack, SpectralIndex index) {
  SceneStack out;
  out.sensor = stack.sensor;
  out.scenes.reserve(stack.size());
  for (const auto& s : stack.scenes) {
    TimedScene derived = TimedScene::make(s.grid, s.timestamp);
    derived.valid_mask = s.valid_mask;
    derived.metadata = s.metadata;
    derived.set_band(std::string(index_name(index)), spectral_index(s, index));
    out.scenes.push_back(std::move(derived));
  }
  return out;
}

Raster seasonal_median(const SceneStack& stack, SpectralIndex index, Season season) {
  SceneStack in_season;
  in_season.sensor = stack.sensor;
  for (const auto& s : stack.scenes)
    if (season_of_month(s.timestamp.month) == season) in_season.scenes.push_back(s);
  if (in_season.empty()) return Raster(stack.grid());
  return percentile_reduce(index_stack(in_season, index), index_name(index), 0.5);
}

features::FeatureCube optical_feature_set(const SceneStack& stack, const OpticalConfig& config) {
  using features::LayerSource;
  if (stack.empty()) throw DataError("optical features: empty stack");
  features::FeatureCube cube(stack.grid());

  for (const auto& band : config.bands) cube.add(band + "_med", percentile_reduce(stack, band, 0.5), LayerSource::optical);

  bool have_ndvi = false;
  for (SpectralIndex index : config.indices) {
    const std::string name(index_name(index));
    const SceneStack derived = index_stack(stack, index);
    auto pct = percentile_reduce(derived, name, config.percentiles);
    for (std::size_t k = 0; k < pct.size(); ++k)
      cube.add(name + "_" + percentile_label(config.percentiles[k]), std::move(pct[k]), LayerSource::optical);
    cube.add(name + "_std", moment_reduce(derived, name, Moment::std), LayerSource::optical);
    cube.add(name + "_kurt", moment_reduce(derived, name, Moment::kurtosis), LayerSource::optical);
    cube.add(name + "_skew", moment_reduce(derived, name, Moment::skewness), LayerSource::optical);
    if (index != SpectralIndex::ndvi) continue;
    have_ndvi = true;
    if (config.ndvi_texture)
      cube.add("ndvi_texture", moving_window_std(percentile_reduce(derived, name, 0.5), config.texture_window),
               LayerSource::optical);
  }
  if (have_ndvi && config.seasonal_ndvi)
    for (Season season : {Season::spring, Season::summer, Season::fall, Season::winter})
      cube.add("ndvi_med_" + std::string(season_name(season)), seasonal_median(stack, SpectralIndex::ndvi, season),
               LayerSource::optical);

  cube.attributes()["sensor"] = "optical";
  cube.attributes()["scenes"] = std::to_string(stack.size());
  cube.attributes()["texture_window"] = std::to_string(config.texture_window);
  return cube;
}

}  // namespace landcover::optical
