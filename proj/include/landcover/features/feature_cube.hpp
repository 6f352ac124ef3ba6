#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "landcover/features/feature_matrix.hpp"
#include "landcover/raster/grid.hpp"
#include "landcover/raster/reducers.hpp"

namespace landcover::features {

enum class LayerSource { optical, radar, aux };

std::string_view source_name(LayerSource source);
LayerSource parse_source(std::string_view name);

struct FeatureLayer {
  Raster raster;
  LayerSource source = LayerSource::optical;
  /// Name of the layer this one duplicates when a fallback filled a gap.
  std::string copied_from;
};

/// Named predictor layers on one grid, ordered by name.
class FeatureCube {
 public:
  FeatureCube() = default;
  explicit FeatureCube(GridSpec grid) : grid_(std::move(grid)) {}

  const GridSpec& grid() const { return grid_; }
  std::size_t size() const { return layers_.size(); }
  bool empty() const { return layers_.empty(); }
  bool contains(std::string_view name) const { return layers_.find(name) != layers_.end(); }

  /// Throws DataError on a duplicate name or a grid mismatch.
  void add(std::string name, Raster raster, LayerSource source, std::string copied_from = {});

  const FeatureLayer& layer(std::string_view name) const;
  const std::map<std::string, FeatureLayer, std::less<>>& layers() const { return layers_; }
  std::vector<std::string> names() const;

  /// Free-form provenance recorded in the manifest (filter settings etc.).
  std::map<std::string, std::string>& attributes() { return attributes_; }
  const std::map<std::string, std::string>& attributes() const { return attributes_; }

 private:
  GridSpec grid_;
  std::map<std::string, FeatureLayer, std::less<>> layers_;
  std::map<std::string, std::string> attributes_;
};

/// Union of two cubes; grids must match and names must be disjoint.
FeatureCube merge(const FeatureCube& a, const FeatureCube& b);

/// Auxiliary predictors, possibly on coarser grids than the analysis grid.
struct AuxLayerSet {
  Raster elevation;
  Raster precip_mean_10y;
  Raster precip_std_10y;
  Raster temp_mean_10y;
  Raster temp_std_10y;
  Raster nightlights;

  static const std::vector<std::string>& layer_names();
  const Raster& get(std::string_view name) const;
  Raster& get(std::string_view name);

  /// All six layers brought onto `grid` (unchanged when already there).
  FeatureCube to_cube(const GridSpec& grid, Resampling method = Resampling::bilinear) const;
};

enum class Fusion { s1_only, s2_only, s1s2, s1s2_aux };

std::string_view fusion_name(Fusion fusion);
Fusion parse_fusion(std::string_view name);

/// Optical = Sentinel-2 side (s2), radar = Sentinel-1 side (s1).
FeatureCube assemble(const FeatureCube* optical, const FeatureCube* radar, const AuxLayerSet* aux, Fusion fusion);

struct SamplePoint {
  double x = 0;
  double y = 0;
  std::optional<int> label;
  std::string id;
};

struct SampleResult {
  FeatureMatrix matrix;
  std::size_t dropped_nodata = 0;
  std::size_t dropped_outside = 0;
};

/// Nearest-cell lookup of every layer at each point. Points off the grid
/// or over a missing value in any layer are dropped and counted.
SampleResult sample_at(const FeatureCube& cube, const std::vector<SamplePoint>& points);

/// Directory of canonical tiles plus manifest.json.
void write_cube(const FeatureCube& cube, const std::filesystem::path& dir);
FeatureCube read_cube(const std::filesystem::path& dir);

}  // namespace landcover::features
