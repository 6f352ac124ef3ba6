#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace landcover::features {

/// Row-major sample table: one row per sample, one column per feature,
/// with optional integer class labels and a string id per row.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  explicit FeatureMatrix(std::vector<std::string> feature_names);

  std::size_t rows() const { return ids_.size(); }
  std::size_t cols() const { return names_.size(); }
  bool has_labels() const { return !labels_.empty(); }

  const std::vector<std::string>& feature_names() const { return names_; }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<std::string>& ids() const { return ids_; }

  std::span<const double> row(std::size_t i) const { return {values_.data() + i * cols(), cols()}; }
  double at(std::size_t i, std::size_t j) const { return values_[i * cols() + j]; }
  int label(std::size_t i) const { return labels_.at(i); }
  const std::string& id(std::size_t i) const { return ids_[i]; }

  /// Labels must be given for every row or for none. Rejects NaN values.
  void add_row(std::span<const double> values, std::optional<int> label, std::string id);
  void set_label(std::size_t i, int label) { labels_.at(i) = label; }

  std::optional<std::size_t> feature_index(std::string_view name) const;

  FeatureMatrix select_rows(std::span<const std::size_t> rows) const;
  FeatureMatrix select_features(std::span<const std::string> names) const;

  /// Sorted distinct labels.
  std::vector<int> classes() const;

 private:
  std::vector<std::string> names_;
  std::vector<double> values_;
  std::vector<int> labels_;
  std::vector<std::string> ids_;
};

// CSV layout: feature columns, then "label" (may be empty) and "id".
FeatureMatrix read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(const FeatureMatrix& matrix, const std::filesystem::path& path);

}  // namespace landcover::features
