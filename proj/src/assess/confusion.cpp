#include "landcover/assess/confusion.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "landcover/core/csv.hpp"
#include "landcover/core/error.hpp"

namespace landcover::assess {

ConfusionMatrix::ConfusionMatrix(const ClassCatalog& catalog)
    : catalog_(&catalog), counts_(catalog.size() * catalog.size(), 0) {}

void ConfusionMatrix::add(int predicted, int reference, std::uint64_t count) {
  counts_[catalog_->index_of(predicted) * size() + catalog_->index_of(reference)] += count;
}

std::uint64_t ConfusionMatrix::row_total(std::size_t pred_index) const {
  std::uint64_t sum = 0;
  for (std::size_t r = 0; r < size(); ++r) sum += count(pred_index, r);
  return sum;
}

std::uint64_t ConfusionMatrix::column_total(std::size_t ref_index) const {
  std::uint64_t sum = 0;
  for (std::size_t p = 0; p < size(); ++p) sum += count(p, ref_index);
  return sum;
}

std::uint64_t ConfusionMatrix::diagonal() const {
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < size(); ++i) sum += count(i, i);
  return sum;
}

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t sum = 0;
  for (auto c : counts_) sum += c;
  return sum;
}

ConfusionMatrix confusion(std::span<const int> predicted, std::span<const int> reference, const ClassCatalog& catalog) {
  if (predicted.size() != reference.size())
    throw DataError("confusion: " + std::to_string(predicted.size()) + " predictions vs " +
                    std::to_string(reference.size()) + " references");
  if (predicted.empty()) throw DataError("confusion: no samples");
  ConfusionMatrix cm(catalog);
  for (std::size_t i = 0; i < predicted.size(); ++i) cm.add(predicted[i], reference[i]);
  return cm;
}

Estimate proportion_estimate(std::uint64_t hits, std::uint64_t n) {
  Estimate e;
  e.n = n;
  if (n == 0) return e;
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  e.percent = p * 100.0;
  e.se = std::sqrt(p * (1.0 - p) / static_cast<double>(n)) * 100.0;
  return e;
}

AccuracyReport accuracy_report(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw DataError("accuracy report: empty confusion matrix");
  AccuracyReport report;
  report.overall = proportion_estimate(cm.diagonal(), cm.total());
  for (std::size_t i = 0; i < cm.size(); ++i) {
    const auto& info = cm.catalog().classes()[i];
    report.classes.push_back({info.id, info.name, proportion_estimate(cm.count(i, i), cm.row_total(i)),
                              proportion_estimate(cm.count(i, i), cm.column_total(i))});
  }
  return report;
}

namespace {

int leading_id(const std::string& cell, const std::string& ctx) {
  std::size_t end = 0;
  while (end < cell.size() && (std::isdigit(static_cast<unsigned char>(cell[end])) || (end == 0 && cell[end] == '-')))
    ++end;
  return static_cast<int>(csv::parse_int(std::string_view(cell).substr(0, end), ctx));
}

std::string fmt1(const std::optional<double>& v) {
  if (!v) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", *v);
  return buf;
}

}  // namespace

ConfusionMatrix read_confusion_csv(const std::filesystem::path& path, const ClassCatalog& catalog) {
  csv::Table t = csv::read(path);
  const std::string ctx = path.string();
  std::vector<int> ref_ids;
  for (std::size_t j = 1; j < t.header.size(); ++j) ref_ids.push_back(leading_id(t.header[j], ctx + ": header"));
  ConfusionMatrix cm(catalog);
  for (const auto& row : t.rows) {
    const int pred = leading_id(row[0], ctx + ": prediction label");
    for (std::size_t j = 1; j < row.size(); ++j) {
      const long long n = csv::parse_int(row[j], ctx + ": count");
      if (n < 0) throw DataError(ctx + ": negative count");
      cm.add(pred, ref_ids[j - 1], static_cast<std::uint64_t>(n));
    }
  }
  return cm;
}

void write_confusion_csv(const ConfusionMatrix& cm, const std::filesystem::path& path) {
  csv::Table t;
  t.header = {"prediction"};
  for (const auto& c : cm.catalog().classes()) t.header.push_back(std::to_string(c.id));
  for (std::size_t p = 0; p < cm.size(); ++p) {
    std::vector<std::string> row = {std::to_string(cm.catalog().classes()[p].id)};
    for (std::size_t r = 0; r < cm.size(); ++r) row.push_back(std::to_string(cm.count(p, r)));
    t.rows.push_back(std::move(row));
  }
  csv::write(path, t);
}

void write_report_csv(const AccuracyReport& report, const std::filesystem::path& path) {
  csv::Table t;
  t.header = {"measure", "class_id", "class", "percent", "se", "n"};
  auto emit = [&](const char* measure, int id, const std::string& name, const Estimate& e) {
    t.rows.push_back({measure, id ? std::to_string(id) : std::string(), name,
                      e.percent ? csv::format_double(*e.percent) : std::string(),
                      e.se ? csv::format_double(*e.se) : std::string(), std::to_string(e.n)});
  };
  emit("OA", 0, "", report.overall);
  for (const auto& c : report.classes) emit("UA", c.class_id, c.name, c.users);
  for (const auto& c : report.classes) emit("PA", c.class_id, c.name, c.producers);
  csv::write(path, t);
}

std::string format_report(const ConfusionMatrix& cm, const AccuracyReport& report) {
  std::ostringstream out;
  out << "| Prediction |";
  for (const auto& c : cm.catalog().classes()) out << ' ' << c.id << " |";
  out << " Total | UA (%) | SE |\n|---|";
  for (std::size_t i = 0; i < cm.size() + 3; ++i) out << "---|";
  out << '\n';
  for (std::size_t p = 0; p < cm.size(); ++p) {
    const auto& info = cm.catalog().classes()[p];
    out << "| " << info.id << ' ' << info.name << " |";
    for (std::size_t r = 0; r < cm.size(); ++r) out << ' ' << cm.count(p, r) << " |";
    out << ' ' << cm.row_total(p) << " | " << fmt1(report.classes[p].users.percent) << " | "
        << fmt1(report.classes[p].users.se) << " |\n";
  }
  out << "| Total |";
  for (std::size_t r = 0; r < cm.size(); ++r) out << ' ' << cm.column_total(r) << " |";
  out << ' ' << cm.total() << " | | |\n| PA (%) |";
  for (const auto& c : report.classes) out << ' ' << fmt1(c.producers.percent) << " |";
  out << " | " << fmt1(report.overall.percent) << " | |\n| SE |";
  for (const auto& c : report.classes) out << ' ' << fmt1(c.producers.se) << " |";
  out << " | | " << fmt1(report.overall.se) << " |\n";
  return out.str();
}

}  // namespace landcover::assess
