#include "landcover/assess/grid_accuracy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "landcover/core/csv.hpp"
#include "landcover/core/error.hpp"

namespace landcover::assess {

GridAccuracyResult grid_accuracy(std::span<const ValidationSample> samples, double cell_size, std::size_t min_n) {
  if (!(cell_size > 0) || !std::isfinite(cell_size)) throw ArgumentError("grid accuracy: cell_size must be positive");

  struct Bucket {
    std::size_t n = 0, correct = 0;
    std::set<int> refs;
  };
  std::map<std::pair<std::int64_t, std::int64_t>, Bucket> buckets;
  for (const auto& s : samples) {
    if (!std::isfinite(s.x) || !std::isfinite(s.y)) throw DataError("grid accuracy: non-finite coordinate");
    const auto col = static_cast<std::int64_t>(std::floor(s.x / cell_size));
    const auto row = static_cast<std::int64_t>(std::floor(s.y / cell_size));
    auto& b = buckets[{row, col}];
    ++b.n;
    b.correct += s.predicted == s.reference;
    b.refs.insert(s.reference);
  }

  GridAccuracyResult result;
  for (const auto& [key, b] : buckets) {
    GridAccuracyCell cell;
    cell.row = key.first;
    cell.col = key.second;
    cell.min_x = static_cast<double>(cell.col) * cell_size;
    cell.max_x = cell.min_x + cell_size;
    cell.min_y = static_cast<double>(cell.row) * cell_size;
    cell.max_y = cell.min_y + cell_size;
    cell.samples = b.n;
    cell.reference_classes = b.refs.size();
    if (b.n >= min_n && b.refs.size() >= 2) {
      const double oa = 100.0 * static_cast<double>(b.correct) / static_cast<double>(b.n);
      cell.oa = oa;
      const auto bin = std::min<std::size_t>(static_cast<std::size_t>(oa / kHistogramBinWidth), kHistogramBins - 1);
      ++result.histogram[bin];
      ++result.eligible;
    }
    result.cells.push_back(cell);
  }
  return result;
}

std::vector<ValidationSample> read_validation_csv(const std::filesystem::path& path) {
  csv::Table t = csv::read(path);
  const std::string ctx = path.string();
  const auto ix = t.column("x"), iy = t.column("y"), ip = t.column("predicted"), ir = t.column("reference");
  std::vector<ValidationSample> out;
  out.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    out.push_back({csv::parse_double(row[ix], ctx), csv::parse_double(row[iy], ctx),
                   static_cast<int>(csv::parse_int(row[ip], ctx)), static_cast<int>(csv::parse_int(row[ir], ctx))});
  }
  return out;
}

void write_grid_csv(const GridAccuracyResult& result, const std::filesystem::path& path) {
  csv::Table t;
  t.header = {"cell_id", "row", "col", "min_x", "min_y", "max_x", "max_y", "samples", "reference_classes", "oa"};
  for (const auto& c : result.cells) {
    t.rows.push_back({std::to_string(c.row) + "_" + std::to_string(c.col), std::to_string(c.row), std::to_string(c.col),
                      csv::format_double(c.min_x), csv::format_double(c.min_y), csv::format_double(c.max_x),
                      csv::format_double(c.max_y), std::to_string(c.samples), std::to_string(c.reference_classes),
                      c.oa ? csv::format_double(*c.oa) : std::string("insufficient")});
  }
  csv::write(path, t);
}

void write_histogram_csv(const GridAccuracyResult& result, const std::filesystem::path& path) {
  csv::Table t;
  t.header = {"oa_from", "oa_to", "cells"};
  for (std::size_t i = 0; i < kHistogramBins; ++i) {
    t.rows.push_back({csv::format_double(static_cast<double>(i) * kHistogramBinWidth),
                      csv::format_double(static_cast<double>(i + 1) * kHistogramBinWidth),
                      std::to_string(result.histogram[i])});
  }
  csv::write(path, t);
}

}  // namespace landcover::assess
