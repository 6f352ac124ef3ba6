#include "landcover/rf/importance.hpp"

#include <cmath>
#include <numeric>

#include "landcover/core/error.hpp"
#include "landcover/core/parallel.hpp"
#include "landcover/core/random.hpp"

namespace landcover::rf {

std::vector<double> gini_importance(const Forest& forest) {
  std::vector<double> out(forest.feature_names().size(), 0.0);
  for (const Tree& tree : forest.trees()) {
    const double total = tree.bootstrap_size;
    for (const TreeNode& node : tree.nodes)
      if (!node.is_leaf()) out[static_cast<std::size_t>(node.feature)] += node.samples / total * node.gini_decrease;
  }
  for (double& v : out) v /= forest.ntree();
  return out;
}

std::vector<double> permutation_importance(const Forest& forest, const FeatureMatrix& matrix) {
  if (matrix.ids() != forest.training_ids())
    throw DataError("importance: matrix sample ids do not match the forest's training ids");
  const std::size_t p = matrix.cols();
  const std::size_t ntree = forest.trees().size();
  // Per-tree decreases, reduced in tree order for thread-count independence.
  std::vector<std::vector<double>> per_tree(ntree, std::vector<double>(p, 0.0));
  std::vector<std::uint8_t> has_oob(ntree, 0);

  parallel_for(ntree, [&](std::size_t t) {
    const Tree& tree = forest.trees()[t];
    std::vector<std::size_t> oob;
    for (std::size_t i = 0; i < matrix.rows(); ++i)
      if (!tree.in_bag(i)) oob.push_back(i);
    if (oob.empty()) return;
    has_oob[t] = 1;
    auto correct_with = [&](std::size_t feature, const std::vector<std::size_t>* donors) {
      std::vector<double> row(p);
      std::size_t correct = 0;
      for (std::size_t k = 0; k < oob.size(); ++k) {
        auto src = matrix.row(oob[k]);
        std::copy(src.begin(), src.end(), row.begin());
        if (donors) row[feature] = matrix.at((*donors)[k], feature);
        const int predicted = forest.classes()[static_cast<std::size_t>(tree.predict_index(row))];
        if (predicted == matrix.label(oob[k])) ++correct;
      }
      return static_cast<double>(correct) / static_cast<double>(oob.size());
    };
    const double base = correct_with(0, nullptr);
    for (std::size_t f = 0; f < p; ++f) {
      std::vector<std::size_t> donors = oob;
      Rng rng(derive_seed(forest.seed() ^ 0x5045524dULL, t, f));
      shuffle(std::span<std::size_t>(donors), rng);
      per_tree[t][f] = base - correct_with(f, &donors);
    }
  });

  std::vector<double> out(p, 0.0);
  std::size_t used = 0;
  for (std::size_t t = 0; t < ntree; ++t) {
    if (!has_oob[t]) continue;
    ++used;
    for (std::size_t f = 0; f < p; ++f) out[f] += per_tree[t][f];
  }
  if (used)
    for (double& v : out) v /= static_cast<double>(used);
  return out;
}

ForestImportance forest_importance(const Forest& forest, const FeatureMatrix& matrix) {
  return {permutation_importance(forest, matrix), gini_importance(forest)};
}

ImportanceReport importance(const Forest& forest, const FeatureMatrix& matrix, int bootstraps) {
  if (bootstraps < 1) throw ArgumentError("importance: bootstraps must be >= 1");
  const std::size_t p = forest.feature_names().size();
  std::vector<ForestImportance> runs(static_cast<std::size_t>(bootstraps));
  runs[0] = forest_importance(forest, matrix);
  for (int b = 1; b < bootstraps; ++b) {
    ForestParams params = forest.params();
    params.seed = derive_seed(forest.seed(), static_cast<std::uint64_t>(b));
    runs[static_cast<std::size_t>(b)] = forest_importance(train(matrix, params), matrix);
  }

  auto summarise = [&](std::size_t f, auto member) {
    double mean = 0;
    for (const auto& r : runs) mean += (r.*member)[f];
    mean /= bootstraps;
    double ss = 0;
    for (const auto& r : runs) ss += ((r.*member)[f] - mean) * ((r.*member)[f] - mean);
    const double se = bootstraps > 1 ? std::sqrt(ss / (bootstraps - 1)) / std::sqrt(static_cast<double>(bootstraps)) : 0.0;
    return std::pair{mean, se};
  };

  ImportanceReport report;
  report.bootstraps = bootstraps;
  for (std::size_t f = 0; f < p; ++f) {
    FeatureImportance fi;
    fi.name = forest.feature_names()[f];
    std::tie(fi.mda_mean, fi.mda_se) = summarise(f, &ForestImportance::mean_decrease_accuracy);
    std::tie(fi.mdg_mean, fi.mdg_se) = summarise(f, &ForestImportance::mean_decrease_gini);
    report.features.push_back(std::move(fi));
  }
  return report;
}

}  // namespace landcover::rf
