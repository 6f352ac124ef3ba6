#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "landcover/features/feature_matrix.hpp"

namespace landcover::rf {

using features::FeatureMatrix;

struct ForestParams {
  int ntree = 100;
  /// Features drawn per split; 0 selects floor(sqrt(feature count)).
  int mtry = 0;
  std::uint64_t seed = 0;

  int resolved_mtry(std::size_t feature_count) const;
  void validate(std::size_t feature_count) const;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  int leaf_class = -1;  // index into Forest::classes()
  std::uint32_t samples = 0;
  double gini_decrease = 0.0;
  std::vector<std::uint32_t> counts;  // leaves only

  bool is_leaf() const { return feature < 0; }
};

struct Tree {
  std::vector<TreeNode> nodes;
  /// Sorted distinct training rows drawn into the bootstrap.
  std::vector<std::uint32_t> inbag;
  std::uint32_t bootstrap_size = 0;

  /// Class index of the leaf reached by `row` (value <= threshold goes left).
  int predict_index(std::span<const double> row) const;
  bool in_bag(std::size_t row) const { return row < inbag_mask_.size() && inbag_mask_[row] != 0; }
  std::size_t depth() const;
  void rebuild_mask(std::size_t training_rows);

 private:
  std::vector<std::uint8_t> inbag_mask_;
};

struct Prediction {
  int class_id = 0;
  /// Fraction of trees voting each class, aligned with Forest::classes().
  std::vector<double> votes;
};

class Forest {
 public:
  const std::vector<Tree>& trees() const { return trees_; }
  int ntree() const { return static_cast<int>(trees_.size()); }
  int mtry() const { return mtry_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  const std::vector<int>& classes() const { return classes_; }
  const std::vector<std::string>& training_ids() const { return training_ids_; }
  ForestParams params() const { return {ntree(), mtry_, seed_}; }

  std::size_t class_index(int class_id) const;

  /// Majority vote; ties go to the class listed first. `tree_limit` uses
  /// only the first trees (0 = all).
  Prediction predict(std::span<const double> row, std::size_t tree_limit = 0) const;

  std::string to_json() const;
  static Forest from_json(std::string_view text);
  void save(const std::filesystem::path& path) const;
  static Forest load(const std::filesystem::path& path);

 private:
  friend Forest train(const FeatureMatrix& matrix, const ForestParams& params);

  std::vector<Tree> trees_;
  int mtry_ = 1;
  std::uint64_t seed_ = 0;
  std::vector<std::string> feature_names_;
  std::vector<int> classes_;
  std::vector<std::string> training_ids_;
};

/// 1 - sum p_c^2.
double gini_impurity(std::span<const std::uint32_t> counts);

/// Fully grown trees on bootstrap samples; tree t is seeded by
/// derive_seed(params.seed, t), so a forest of k trees is the k-tree prefix
/// of any larger forest with the same seed and mtry.
Forest train(const FeatureMatrix& matrix, const ForestParams& params);

struct OobResult {
  double accuracy = 0.0;  // fraction of scored samples
  std::size_t scored = 0;
  std::size_t never_oob = 0;
  /// Out-of-bag majority class per training row; empty when never out of bag.
  std::vector<std::optional<int>> predictions;
};

/// `matrix` must be the training matrix (same ids in the same order).
OobResult oob_evaluate(const Forest& forest, const FeatureMatrix& matrix, std::size_t tree_limit = 0);

}  // namespace landcover::rf
