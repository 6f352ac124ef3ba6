#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "landcover/reference/catalog.hpp"

namespace landcover::assess {

using reference::ClassCatalog;

/// Counts indexed [prediction][reference] in catalog order.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(const ClassCatalog& catalog = ClassCatalog::standard());

  const ClassCatalog& catalog() const { return *catalog_; }
  std::size_t size() const { return catalog_->size(); }

  void add(int predicted, int reference, std::uint64_t count = 1);
  std::uint64_t count(std::size_t pred_index, std::size_t ref_index) const { return counts_[pred_index * size() + ref_index]; }
  std::uint64_t row_total(std::size_t pred_index) const;
  std::uint64_t column_total(std::size_t ref_index) const;
  std::uint64_t diagonal() const;
  std::uint64_t total() const;

  bool operator==(const ConfusionMatrix& other) const { return counts_ == other.counts_; }

 private:
  const ClassCatalog* catalog_;
  std::vector<std::uint64_t> counts_;
};

ConfusionMatrix confusion(std::span<const int> predicted, std::span<const int> reference,
                          const ClassCatalog& catalog = ClassCatalog::standard());

/// A percentage with its standard error, sqrt(p(1-p)/n)*100; absent when n = 0.
struct Estimate {
  std::optional<double> percent;
  std::optional<double> se;
  std::uint64_t n = 0;
};

Estimate proportion_estimate(std::uint64_t hits, std::uint64_t n);

struct ClassAccuracy {
  int class_id = 0;
  std::string name;
  Estimate users;      // per prediction row
  Estimate producers;  // per reference column
};

struct AccuracyReport {
  Estimate overall;
  std::vector<ClassAccuracy> classes;
};

AccuracyReport accuracy_report(const ConfusionMatrix& cm);

// CSV: header "prediction,<ref id>..." then one row per predicted class id.
// Label cells may carry a name after the id ("1 Artificial land").
ConfusionMatrix read_confusion_csv(const std::filesystem::path& path,
                                   const ClassCatalog& catalog = ClassCatalog::standard());
void write_confusion_csv(const ConfusionMatrix& cm, const std::filesystem::path& path);
void write_report_csv(const AccuracyReport& report, const std::filesystem::path& path);

/// Error matrix with totals and UA/PA/SE margins, tab-free markdown.
std::string format_report(const ConfusionMatrix& cm, const AccuracyReport& report);

}  // namespace landcover::assess
