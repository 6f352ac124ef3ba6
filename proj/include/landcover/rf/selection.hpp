#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "landcover/rf/forest.hpp"

namespace landcover::rf {

struct RfeStep {
  std::size_t feature_count = 0;
  double oob_accuracy = 0;
  std::vector<std::string> features;
};

struct RfeResult {
  std::vector<std::string> selected;
  std::vector<RfeStep> trace;
};

/// Recursive feature elimination by mean decrease Gini. Each round drops
/// ceil(drop_fraction * current) features (never below target_count).
/// params.mtry == 0 re-resolves floor(sqrt(p)) each round.
RfeResult rfe(const FeatureMatrix& matrix, std::size_t target_count = 15, double drop_fraction = 0.2,
              const ForestParams& params = {});

struct TuneCell {
  int ntree = 0;
  int mtry = 0;
  double oob_error = 0;
};

struct TuneResult {
  int best_ntree = 0;
  int best_mtry = 0;
  double best_error = 0;
  std::vector<TuneCell> surface;
};

std::vector<int> default_ntree_grid();  // 50, 75, ..., 500
std::vector<int> default_mtry_grid();   // 1..10

/// OOB error over the full grid; ties prefer smaller ntree, then smaller mtry.
TuneResult tune(const FeatureMatrix& matrix, std::vector<int> ntree_grid, std::vector<int> mtry_grid,
                std::uint64_t seed);

}  // namespace landcover::rf
