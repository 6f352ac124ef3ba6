#include "landcover/features/feature_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "landcover/core/csv.hpp"
#include "landcover/core/error.hpp"

namespace landcover::features {

FeatureMatrix::FeatureMatrix(std::vector<std::string> feature_names) : names_(std::move(feature_names)) {
  std::set<std::string_view> seen;
  for (const auto& n : names_)
    if (!seen.insert(n).second) throw DataError("feature matrix: duplicate feature name '" + n + "'");
}

void FeatureMatrix::add_row(std::span<const double> values, std::optional<int> label, std::string id) {
  if (values.size() != cols())
    throw DataError("feature matrix: row '" + id + "' has " + std::to_string(values.size()) + " values, expected " +
                    std::to_string(cols()));
  for (double v : values)
    if (std::isnan(v)) throw DataError("feature matrix: row '" + id + "' contains NaN");
  if (rows() > 0 && label.has_value() != has_labels())
    throw DataError("feature matrix: labels must be present for all rows or none");
  values_.insert(values_.end(), values.begin(), values.end());
  if (label) labels_.push_back(*label);
  ids_.push_back(std::move(id));
}

std::optional<std::size_t> FeatureMatrix::feature_index(std::string_view name) const {
  for (std::size_t j = 0; j < names_.size(); ++j)
    if (names_[j] == name) return j;
  return std::nullopt;
}

FeatureMatrix FeatureMatrix::select_rows(std::span<const std::size_t> rows) const {
  FeatureMatrix out(names_);
  out.values_.reserve(rows.size() * cols());
  for (std::size_t r : rows) {
    if (r >= this->rows()) throw ArgumentError("feature matrix: row index out of range");
    auto src = row(r);
    out.values_.insert(out.values_.end(), src.begin(), src.end());
    if (has_labels()) out.labels_.push_back(labels_[r]);
    out.ids_.push_back(ids_[r]);
  }
  return out;
}

FeatureMatrix FeatureMatrix::select_features(std::span<const std::string> names) const {
  std::vector<std::size_t> idx;
  for (const auto& n : names) {
    auto j = feature_index(n);
    if (!j) throw DataError("feature matrix: unknown feature '" + n + "'");
    idx.push_back(*j);
  }
  FeatureMatrix out(std::vector<std::string>(names.begin(), names.end()));
  out.values_.reserve(rows() * idx.size());
  for (std::size_t i = 0; i < rows(); ++i)
    for (std::size_t j : idx) out.values_.push_back(at(i, j));
  out.labels_ = labels_;
  out.ids_ = ids_;
  return out;
}

std::vector<int> FeatureMatrix::classes() const {
  std::vector<int> out(labels_.begin(), labels_.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

FeatureMatrix read_matrix_csv(const std::filesystem::path& path) {
  csv::Table t = csv::read(path);
  const std::size_t label_col = t.column("label");
  const std::size_t id_col = t.column("id");
  std::vector<std::size_t> feature_cols;
  std::vector<std::string> names;
  for (std::size_t j = 0; j < t.header.size(); ++j) {
    if (j == label_col || j == id_col) continue;
    feature_cols.push_back(j);
    names.push_back(t.header[j]);
  }
  FeatureMatrix m(std::move(names));
  std::vector<double> values(feature_cols.size());
  for (const auto& row : t.rows) {
    for (std::size_t k = 0; k < feature_cols.size(); ++k)
      values[k] = csv::parse_double(row[feature_cols[k]], path.string() + ": " + t.header[feature_cols[k]]);
    std::optional<int> label;
    if (!row[label_col].empty()) label = static_cast<int>(csv::parse_int(row[label_col], path.string() + ": label"));
    m.add_row(values, label, row[id_col]);
  }
  return m;
}

void write_matrix_csv(const FeatureMatrix& matrix, const std::filesystem::path& path) {
  csv::Table t;
  t.header = matrix.feature_names();
  t.header.push_back("label");
  t.header.push_back("id");
  t.rows.reserve(matrix.rows());
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    std::vector<std::string> row;
    row.reserve(matrix.cols() + 2);
    for (double v : matrix.row(i)) row.push_back(csv::format_double(v));
    row.push_back(matrix.has_labels() ? std::to_string(matrix.label(i)) : std::string());
    row.push_back(matrix.id(i));
    t.rows.push_back(std::move(row));
  }
  csv::write(path, t);
}

}  // namespace landcover::features
