#include "landcover/radar/radar.hpp"

#include <algorithm>
#include <cmath>

#include "landcover/core/error.hpp"
#include "landcover/core/parallel.hpp"
#include "landcover/raster/reducers.hpp"

namespace landcover::radar {

void SigmaFilterConfig::validate() const {
  if (window < 3 || window % 2 == 0) throw ArgumentError("sigma filter: window must be odd and >= 3");
  if (!(enl > 0.0)) throw ArgumentError("sigma filter: enl must be positive");
  if (!(k_sigma > 0.0)) throw ArgumentError("sigma filter: k_sigma must be positive");
  if (min_selected < 1) throw ArgumentError("sigma filter: min_selected must be >= 1");
}

Raster sigma_filter(const Raster& band, const std::vector<std::uint8_t>& valid_mask, const SigmaFilterConfig& cfg) {
  cfg.validate();
  if (valid_mask.size() != band.size()) throw DataError("sigma filter: mask size differs from band");
  const int half = cfg.window / 2;
  const int h = band.height();
  const int w = band.width();
  const double spread = cfg.k_sigma / std::sqrt(cfg.enl);
  Raster out = band;

  parallel_for(static_cast<std::size_t>(h), [&](std::size_t row_index) {
    const int row = static_cast<int>(row_index);
    std::vector<double> window;
    window.reserve(static_cast<std::size_t>(cfg.window) * static_cast<std::size_t>(cfg.window));
    for (int col = 0; col < w; ++col) {
      const std::size_t centre = band.index(row, col);
      if (!valid_mask[centre] || !band.valid(centre)) continue;
      window.clear();
      for (int r = std::max(0, row - half); r <= std::min(h - 1, row + half); ++r)
        for (int c = std::max(0, col - half); c <= std::min(w - 1, col + half); ++c) {
          const std::size_t i = band.index(r, c);
          if (valid_mask[i] && band.valid(i)) window.push_back(band[i]);
        }
      // Centre-shifted sums reproduce constant windows exactly.
      const double shift = band[centre];
      double sum = 0;
      for (double v : window) sum += v - shift;
      const double mean = shift + sum / static_cast<double>(window.size());
      const double lo = mean * (1.0 - spread);
      const double hi = mean * (1.0 + spread);
      double sel_sum = 0, sel_min = 0, sel_max = 0;
      int selected = 0;
      for (double v : window) {
        if (v < std::min(lo, hi) || v > std::max(lo, hi)) continue;
        sel_sum += v - shift;
        sel_min = selected ? std::min(sel_min, v) : v;
        sel_max = selected ? std::max(sel_max, v) : v;
        ++selected;
      }
      if (selected >= cfg.min_selected) {
        out[centre] = std::clamp(shift + sel_sum / selected, sel_min, sel_max);
      } else {
        std::sort(window.begin(), window.end());
        out[centre] = kernel::percentile_sorted(window, 0.5);
      }
    }
  });
  return out;
}

TimedScene sigma_filter(const TimedScene& scene, const SigmaFilterConfig& cfg) {
  TimedScene out = scene;
  for (auto& [name, band] : out.bands) band = sigma_filter(scene.band(name), scene.valid_mask, cfg);
  return out;
}

std::string_view orbit_name(OrbitMode mode) { return mode == OrbitMode::asc ? "asc" : "desc"; }

OrbitMode orbit_of(const TimedScene& scene) {
  auto it = scene.metadata.find(kOrbitModeKey);
  if (it == scene.metadata.end())
    throw DataError("radar scene " + scene.timestamp.to_string() + " has no orbit_mode");
  if (it->second == "ASC" || it->second == "asc") return OrbitMode::asc;
  if (it->second == "DESC" || it->second == "desc") return OrbitMode::desc;
  throw DataError("radar scene " + scene.timestamp.to_string() + ": unknown orbit_mode '" + it->second + "'");
}

namespace {

constexpr std::string_view kRatio = "vvvh";

// Adds the vv/vh ratio band; nodata where either is unobserved or vh == 0.
TimedScene with_ratio(TimedScene scene) {
  const Raster& vv = scene.band(kVV);
  const Raster& vh = scene.band(kVH);
  Raster ratio(scene.grid);
  for (std::size_t i = 0; i < ratio.size(); ++i) {
    if (!scene.observed(vv, i) || !scene.observed(vh, i) || vh[i] == 0.0) continue;
    ratio[i] = vv[i] / vh[i];
  }
  scene.set_band(std::string(kRatio), std::move(ratio));
  return scene;
}

}  // namespace

features::FeatureCube radar_feature_set(const SceneStack& stack, const RadarFeatureOptions& options) {
  using features::LayerSource;
  if (stack.empty()) throw DataError("radar features: empty stack");
  if (options.speckle_filter) options.filter.validate();

  SceneStack by_mode[2];
  for (const auto& s : stack.scenes) {
    TimedScene scene = options.speckle_filter ? sigma_filter(s, options.filter) : s;
    by_mode[orbit_of(s) == OrbitMode::asc ? 0 : 1].scenes.push_back(with_ratio(std::move(scene)));
  }

  features::FeatureCube cube(stack.grid());
  const std::string_view bands[] = {kVV, kVH, kRatio};
  for (int m = 0; m < 2; ++m) {
    const int source_mode = by_mode[m].empty() ? 1 - m : m;
    const std::string prefix(orbit_name(m == 0 ? OrbitMode::asc : OrbitMode::desc));
    const std::string source_prefix(orbit_name(source_mode == 0 ? OrbitMode::asc : OrbitMode::desc));
    const SceneStack& src = by_mode[source_mode];
    for (std::string_view band : bands) {
      const std::string suffix = "_" + std::string(band);
      std::string copied_med, copied_std;
      if (source_mode != m) {
        copied_med = source_prefix + suffix + "_med";
        copied_std = source_prefix + suffix + "_std";
      }
      cube.add(prefix + suffix + "_med", percentile_reduce(src, band, 0.5), LayerSource::radar, copied_med);
      cube.add(prefix + suffix + "_std", moment_reduce(src, band, Moment::std), LayerSource::radar, copied_std);
    }
  }

  cube.attributes()["sensor"] = "radar";
  cube.attributes()["speckle_filter"] = options.speckle_filter ? "on" : "off";
  cube.attributes()["sigma_window"] = std::to_string(options.filter.window);
  cube.attributes()["sigma_enl"] = std::to_string(options.filter.enl);
  cube.attributes()["sigma_k"] = std::to_string(options.filter.k_sigma);
  cube.attributes()["sigma_min_selected"] = std::to_string(options.filter.min_selected);
  if (by_mode[0].empty() || by_mode[1].empty())
    cube.attributes()["orbit_fallback"] = by_mode[0].empty() ? "desc->asc" : "asc->desc";
  return cube;
}

}  // namespace landcover::radar
