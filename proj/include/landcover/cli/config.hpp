#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "landcover/features/feature_cube.hpp"
#include "landcover/optical/optical.hpp"
#include "landcover/radar/radar.hpp"

namespace landcover::cli {

namespace fs = std::filesystem;

struct AblationOptionConfig {
  std::string name;
  std::string matrix;  // may hold {Qn} placeholders for earlier choices
};

struct AblationQuestionConfig {
  std::string id;
  std::vector<AblationOptionConfig> options;
};

struct AblationConfig {
  std::vector<AblationQuestionConfig> questions;
  std::optional<std::string> sample_size_matrix;
};

struct RunConfig {
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  fs::path out = "out";

  /// Named input paths, resolved against the config file directory.
  std::map<std::string, fs::path> inputs;

  double scene_cloud_max = 0.60;
  double cloud_threshold = 40.0;
  optical::OpticalConfig optical;
  radar::RadarFeatureOptions radar;
  features::Fusion fusion = features::Fusion::s1s2_aux;

  int ntree = 100;
  int mtry = 0;
  int importance_bootstraps = 10;

  int rank_bootstraps = 100;
  int rank_ntree = 100;

  int rfe_target = 15;
  double rfe_drop_fraction = 0.2;

  std::vector<int> tune_ntree_grid;
  std::vector<int> tune_mtry_grid;

  double curve_step = 0.05;
  int curve_bootstraps = 10;

  double grid_cell_size = 100000.0;
  int grid_min_n = 20;

  std::string reclass_legend;  // built-in legend name; empty with inputs.reclass_table

  AblationConfig ablation;

  nlohmann::json to_json() const;
};

inline const std::vector<std::string>& input_keys() {
  static const std::vector<std::string> keys = {
      "optical_stack", "radar_stack", "aux_dir",  "reference_csv", "polygons_csv", "ranked_csv",
      "target_proportions", "matrix", "model", "cube", "validation_csv", "map",
      "units", "area_points", "confusion", "reclass_table"};
  return keys;
}

struct ConfigResult {
  std::optional<RunConfig> config;
  std::vector<std::string> errors;  // schema violations, all of them
};

/// Fills defaults and collects every schema violation. `base_dir` anchors
/// relative paths.
ConfigResult parse_config(const nlohmann::json& doc, const fs::path& base_dir);
ConfigResult validate_config(const fs::path& path);

/// Declared inputs that do not exist on disk.
std::vector<std::string> missing_inputs(const RunConfig& config);

}  // namespace landcover::cli
