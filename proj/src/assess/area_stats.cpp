#include "landcover/assess/area_stats.hpp"

#include <cmath>
#include <map>

#include "landcover/core/csv.hpp"
#include "landcover/core/error.hpp"

namespace landcover::assess {

std::optional<LinearFit> ols(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) return std::nullopt;
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) return std::nullopt;
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy == 0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

AreaStatsReport area_stats(const Raster& map, const Raster& units, std::span<const ReferenceSample> points,
                           const reference::ClassCatalog& catalog) {
  if (!(map.grid() == units.grid())) throw DataError("area stats: map and unit grids differ");
  const std::size_t k = catalog.size();

  struct Acc {
    std::vector<std::size_t> mapped, reference;
    std::size_t valid = 0, points = 0;
  };
  std::map<long long, Acc> acc;
  auto unit_at = [&](std::size_t i) { return static_cast<long long>(std::llround(units[i])); };
  auto touch = [&](long long id) -> Acc& {
    auto& a = acc[id];
    if (a.mapped.empty()) {
      a.mapped.assign(k, 0);
      a.reference.assign(k, 0);
    }
    return a;
  };

  for (std::size_t i = 0; i < map.size(); ++i) {
    if (!units.valid(i)) continue;
    auto& a = touch(unit_at(i));
    if (!map.valid(i)) continue;
    a.mapped[catalog.index_of(static_cast<int>(std::llround(map[i])))]++;
    a.valid++;
  }
  for (const auto& p : points) {
    const auto cell = units.grid().locate(p.x, p.y);
    if (!cell) throw DataError("area stats: reference point outside the unit grid");
    const std::size_t i = units.index(cell->row, cell->col);
    if (!units.valid(i)) throw DataError("area stats: reference point outside every unit");
    auto& a = touch(unit_at(i));
    a.reference[catalog.index_of(p.class_id)]++;
    a.points++;
  }

  AreaStatsReport report;
  std::vector<double> xs, ys;
  std::vector<std::vector<double>> cls_x(k), cls_y(k);
  double se = 0, ae = 0;
  for (const auto& [id, a] : acc) {
    if (a.valid == 0) {
      ++report.excluded_no_valid_cells;
      continue;
    }
    if (a.points == 0) {
      ++report.excluded_no_points;
      continue;
    }
    UnitProportions u{id, a.valid, a.points, std::vector<double>(k), std::vector<double>(k)};
    for (std::size_t c = 0; c < k; ++c) {
      u.mapped[c] = static_cast<double>(a.mapped[c]) / static_cast<double>(a.valid);
      u.reference[c] = static_cast<double>(a.reference[c]) / static_cast<double>(a.points);
      xs.push_back(u.reference[c]);
      ys.push_back(u.mapped[c]);
      cls_x[c].push_back(u.reference[c]);
      cls_y[c].push_back(u.mapped[c]);
      const double d = u.mapped[c] - u.reference[c];
      se += d * d;
      ae += std::abs(d);
    }
    report.units.push_back(std::move(u));
  }
  if (xs.empty()) throw DataError("area stats: no unit has both valid cells and reference points");
  const double n = static_cast<double>(xs.size());
  report.rmse = std::sqrt(se / n);
  report.mae = ae / n;
  if (auto fit = ols(xs, ys)) report.pooled = *fit;
  for (std::size_t c = 0; c < k; ++c) report.per_class.push_back(ols(cls_x[c], cls_y[c]));
  return report;
}

void write_area_stats_csv(const AreaStatsReport& report, const std::filesystem::path& path,
                          const reference::ClassCatalog& catalog) {
  csv::Table t;
  t.header = {"unit_id", "class_id", "mapped", "reference", "valid_cells", "points"};
  for (const auto& u : report.units) {
    for (std::size_t c = 0; c < catalog.size(); ++c) {
      t.rows.push_back({std::to_string(u.unit_id), std::to_string(catalog.classes()[c].id),
                        csv::format_double(u.mapped[c]), csv::format_double(u.reference[c]),
                        std::to_string(u.valid_cells), std::to_string(u.points)});
    }
  }
  csv::write(path, t);
}

}  // namespace landcover::assess
