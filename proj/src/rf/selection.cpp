#include "landcover/rf/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <spdlog/spdlog.h>

#include "landcover/core/error.hpp"
#include "landcover/rf/importance.hpp"

namespace landcover::rf {

RfeResult rfe(const FeatureMatrix& matrix, std::size_t target_count, double drop_fraction, const ForestParams& params) {
  if (target_count < 1) throw ArgumentError("rfe: target_count must be >= 1");
  if (!(drop_fraction > 0.0 && drop_fraction < 1.0)) throw ArgumentError("rfe: drop_fraction must lie in (0, 1)");
  if (matrix.cols() < target_count)
    throw ArgumentError("rfe: matrix has " + std::to_string(matrix.cols()) + " features, fewer than target " +
                        std::to_string(target_count));

  RfeResult result;
  std::vector<std::string> current = matrix.feature_names();
  while (current.size() > target_count) {
    const FeatureMatrix sub = matrix.select_features(current);
    ForestParams round = params;
    if (round.mtry > 0) round.mtry = std::min<int>(round.mtry, static_cast<int>(current.size()));
    const Forest forest = train(sub, round);
    const double accuracy = oob_evaluate(forest, sub).accuracy;
    result.trace.push_back({current.size(), accuracy, current});
    spdlog::debug("rfe: {} features, oob accuracy {:.4f}", current.size(), accuracy);

    const std::vector<double> mdg = gini_importance(forest);
    std::vector<std::size_t> order(current.size());
    std::iota(order.begin(), order.end(), 0);
    // Strongest first; equal scores keep the earlier feature.
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return mdg[a] > mdg[b]; });

    const auto drop = static_cast<std::size_t>(std::ceil(drop_fraction * static_cast<double>(current.size())));
    const std::size_t keep = std::max(target_count, current.size() - std::min(drop, current.size()));
    std::vector<std::size_t> kept(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep));
    std::sort(kept.begin(), kept.end());
    std::vector<std::string> next;
    for (std::size_t k : kept) next.push_back(current[k]);
    current = std::move(next);
  }
  result.selected = std::move(current);
  return result;
}

std::vector<int> default_ntree_grid() {
  std::vector<int> grid;
  for (int n = 50; n <= 500; n += 25) grid.push_back(n);
  return grid;
}

std::vector<int> default_mtry_grid() {
  std::vector<int> grid(10);
  std::iota(grid.begin(), grid.end(), 1);
  return grid;
}

TuneResult tune(const FeatureMatrix& matrix, std::vector<int> ntree_grid, std::vector<int> mtry_grid,
                std::uint64_t seed) {
  if (ntree_grid.empty() || mtry_grid.empty()) throw ArgumentError("tune: empty grid");
  std::sort(ntree_grid.begin(), ntree_grid.end());
  ntree_grid.erase(std::unique(ntree_grid.begin(), ntree_grid.end()), ntree_grid.end());
  std::sort(mtry_grid.begin(), mtry_grid.end());
  mtry_grid.erase(std::unique(mtry_grid.begin(), mtry_grid.end()), mtry_grid.end());
  if (ntree_grid.front() < 1 || mtry_grid.front() < 1) throw ArgumentError("tune: grid values must be >= 1");
  if (static_cast<std::size_t>(mtry_grid.back()) > matrix.cols())
    throw ArgumentError("tune: mtry grid exceeds feature count " + std::to_string(matrix.cols()));

  TuneResult result;
  bool have_best = false;
  // Trees depend only on (seed, tree index, mtry), so each ntree is
  // evaluated as a prefix of the largest forest.
  for (int mtry : mtry_grid) {
    const Forest forest = train(matrix, {ntree_grid.back(), mtry, seed});
    for (int ntree : ntree_grid) {
      const double error = 1.0 - oob_evaluate(forest, matrix, static_cast<std::size_t>(ntree)).accuracy;
      result.surface.push_back({ntree, mtry, error});
    }
  }
  std::sort(result.surface.begin(), result.surface.end(), [](const TuneCell& a, const TuneCell& b) {
    return a.ntree != b.ntree ? a.ntree < b.ntree : a.mtry < b.mtry;
  });
  for (const TuneCell& cell : result.surface) {
    if (!have_best || cell.oob_error < result.best_error) {
      result.best_error = cell.oob_error;
      result.best_ntree = cell.ntree;
      result.best_mtry = cell.mtry;
      have_best = true;
    }
  }
  return result;
}

}  // namespace landcover::rf
