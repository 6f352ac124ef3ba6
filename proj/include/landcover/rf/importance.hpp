#pragma once

#include <string>
#include <vector>

#include "landcover/rf/forest.hpp"

namespace landcover::rf {

/// Per-feature scores of one forest, aligned with feature_names().
struct ForestImportance {
  std::vector<double> mean_decrease_accuracy;
  std::vector<double> mean_decrease_gini;
};

/// Sum over split nodes on f of (n_node / n_bootstrap) * Gini decrease,
/// averaged over trees.
std::vector<double> gini_importance(const Forest& forest);

/// Per tree: OOB accuracy minus OOB accuracy after permuting feature f
/// among that tree's OOB rows; averaged over trees with OOB rows.
std::vector<double> permutation_importance(const Forest& forest, const FeatureMatrix& matrix);

ForestImportance forest_importance(const Forest& forest, const FeatureMatrix& matrix);

struct FeatureImportance {
  std::string name;
  double mda_mean = 0;
  double mda_se = 0;
  double mdg_mean = 0;
  double mdg_se = 0;
};

struct ImportanceReport {
  int bootstraps = 0;
  std::vector<FeatureImportance> features;
};

/// Mean and standard error over `bootstraps` forests sharing the forest's
/// ntree/mtry; run 0 is the given forest, run b > 0 is seeded
/// derive_seed(seed, b).
ImportanceReport importance(const Forest& forest, const FeatureMatrix& matrix, int bootstraps = 10);

}  // namespace landcover::rf
