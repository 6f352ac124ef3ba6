#include "landcover/reference/reference.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numeric>
#include <unordered_map>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "landcover/core/csv.hpp"
#include "landcover/core/error.hpp"
#include "landcover/core/random.hpp"

namespace landcover::reference {

std::string_view source_name(PointSource s) { return s == PointSource::polygon_centroid ? "polygon_centroid" : "grid_point"; }

PointSource parse_point_source(std::string_view s) {
  if (s == "polygon_centroid") return PointSource::polygon_centroid;
  if (s == "grid_point") return PointSource::grid_point;
  throw DataError("unknown point source '" + std::string(s) + "'");
}

std::string_view parcel_area_name(ParcelArea a) {
  switch (a) {
    case ParcelArea::lt_0_5ha: return "lt_0_5ha";
    case ParcelArea::ge_0_5ha: return "ge_0_5ha";
    case ParcelArea::unknown: return "unknown";
  }
  return "";
}

ParcelArea parse_parcel_area(std::string_view s) {
  if (s == "lt_0_5ha") return ParcelArea::lt_0_5ha;
  if (s == "ge_0_5ha") return ParcelArea::ge_0_5ha;
  if (s == "unknown" || s.empty()) return ParcelArea::unknown;
  throw DataError("unknown parcel area class '" + std::string(s) + "'");
}

ReferencePoint ReferencePoint::make(std::string id, double x, double y, std::string lc1_code, PointSource source,
                                    ParcelArea area, std::optional<double> cover) {
  if (!std::isfinite(x) || !std::isfinite(y)) throw DataError("reference point " + id + ": non-finite coordinates");
  ReferencePoint p;
  p.toplevel = recode_toplevel(lc1_code);
  p.id = std::move(id);
  p.x = x;
  p.y = y;
  p.lc1_code = std::move(lc1_code);
  p.source = source;
  p.parcel_area = area;
  p.cover_percent = cover;
  return p;
}

const std::vector<std::string>& excluded_codes() {
  static const std::vector<std::string> codes = {"A22", "A39", "B55", "E30", "F40"};
  return codes;
}

std::string_view reject_reason_name(RejectReason r) {
  switch (r) {
    case RejectReason::parcel_area: return "parcel_area";
    case RejectReason::cover_percent: return "cover_percent";
    case RejectReason::excluded_class: return "excluded_class";
  }
  return "";
}

MetadataFilterResult metadata_filter(std::span<const ReferencePoint> points) {
  MetadataFilterResult result;
  const auto& excluded = excluded_codes();
  for (const auto& p : points) {
    if (p.source == PointSource::polygon_centroid) {
      result.kept.push_back(p);
      continue;
    }
    std::optional<RejectReason> reason;
    if (p.parcel_area == ParcelArea::lt_0_5ha)
      reason = RejectReason::parcel_area;
    else if (p.cover_percent && *p.cover_percent < 50.0)
      reason = RejectReason::cover_percent;
    else if (std::find(excluded.begin(), excluded.end(), p.lc1_code) != excluded.end())
      reason = RejectReason::excluded_class;
    if (reason)
      result.rejected.push_back({p, *reason});
    else
      result.kept.push_back(p);
  }
  return result;
}

std::vector<RankedPoint> outlier_rank(std::span<const ReferencePoint> points, const features::FeatureMatrix& matrix,
                                      int bootstraps, const rf::ForestParams& params) {
  if (bootstraps < 1) throw ArgumentError("outlier_rank: bootstraps must be >= 1");
  if (points.size() != matrix.rows())
    throw DataError("outlier_rank: " + std::to_string(points.size()) + " points but " + std::to_string(matrix.rows()) +
                    " matrix rows");

  std::unordered_map<std::string_view, std::size_t> row_of;
  for (std::size_t i = 0; i < matrix.rows(); ++i)
    if (!row_of.emplace(matrix.id(i), i).second) throw DataError("outlier_rank: duplicate matrix id " + matrix.id(i));

  // Canonical row order (sorted by id) makes the result independent of input order.
  std::vector<std::size_t> point_order(points.size());
  std::iota(point_order.begin(), point_order.end(), 0);
  std::sort(point_order.begin(), point_order.end(),
            [&](std::size_t a, std::size_t b) { return points[a].id < points[b].id; });
  std::vector<std::size_t> rows;
  rows.reserve(points.size());
  for (std::size_t k : point_order) {
    auto it = row_of.find(points[k].id);
    if (it == row_of.end()) throw DataError("outlier_rank: no matrix row for point " + points[k].id);
    rows.push_back(it->second);
  }
  features::FeatureMatrix canonical = matrix.select_rows(rows);
  std::vector<int> labels(points.size());
  for (std::size_t r = 0; r < rows.size(); ++r) labels[r] = points[point_order[r]].toplevel;
  if (!canonical.has_labels()) {
    features::FeatureMatrix labelled(canonical.feature_names());
    for (std::size_t r = 0; r < canonical.rows(); ++r) labelled.add_row(canonical.row(r), labels[r], canonical.id(r));
    canonical = std::move(labelled);
  }
  for (std::size_t r = 0; r < rows.size(); ++r) canonical.set_label(r, labels[r]);
  if (canonical.classes().size() < 2) throw DataError("outlier_rank: needs at least two classes");

  std::vector<double> score(rows.size(), 0.0);
  for (int b = 0; b < bootstraps; ++b) {
    rf::ForestParams run = params;
    run.seed = derive_seed(params.seed, static_cast<std::uint64_t>(b));
    const rf::Forest forest = rf::train(canonical, run);
    for (std::size_t r = 0; r < canonical.rows(); ++r)
      score[r] += forest.predict(canonical.row(r)).votes[forest.class_index(labels[r])];
  }
  for (auto& s : score) s /= static_cast<double>(bootstraps);

  std::vector<RankedPoint> ranked;
  ranked.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    ranked.push_back({points[point_order[r]], score[r]});
  const auto& catalog = ClassCatalog::standard();
  auto class_rank = [&](int id) { return catalog.contains(id) ? catalog.index_of(id) : catalog.size() + id; };
  std::stable_sort(ranked.begin(), ranked.end(), [&](const RankedPoint& a, const RankedPoint& b) {
    if (a.vote_fraction != b.vote_fraction) return a.vote_fraction > b.vote_fraction;
    if (a.point.toplevel != b.point.toplevel) return class_rank(a.point.toplevel) < class_rank(b.point.toplevel);
    return a.point.id < b.point.id;
  });
  return ranked;
}

void TargetProportions::validate() const {
  if (fractions.empty()) throw DataError("target proportions: empty table");
  double sum = 0;
  for (const auto& [cls, f] : fractions) {
    if (!(f >= 0.0)) throw DataError("target proportions: negative fraction for class " + std::to_string(cls));
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw DataError("target proportions: fractions sum to " + csv::format_double(sum));
}

double TargetProportions::of(int class_id) const {
  auto it = fractions.find(class_id);
  return it == fractions.end() ? 0.0 : it->second;
}

TargetProportions TargetProportions::read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  TargetProportions t;
  try {
    auto j = nlohmann::json::parse(std::string(std::istreambuf_iterator<char>(in), {}));
    // Keys may be class ids ("3") or class names ("Cropland").
    for (const auto& [key, value] : j.items()) {
      int id;
      try {
        id = static_cast<int>(csv::parse_int(key, "class"));
      } catch (const DataError&) {
        id = ClassCatalog::standard().id_of_name(key);
      }
      t.fractions[id] = value.get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": malformed target proportions: " + e.what());
  }
  t.validate();
  return t;
}

BiasCorrectionResult bias_correct(std::span<const ReferencePoint> polygons, std::span<const RankedPoint> ranked,
                                  const TargetProportions& target) {
  target.validate();
  BiasCorrectionResult result;
  std::map<int, long long> polygon_counts;
  for (const auto& p : polygons) ++polygon_counts[p.toplevel];
  for (const auto& [cls, _] : target.fractions) polygon_counts.try_emplace(cls, 0);

  // Anchor: the most abundant polygon class; ties go to the lower id.
  long long anchor_count = -1;
  for (const auto& [cls, n] : polygon_counts)
    if (n > anchor_count) {
      anchor_count = n;
      result.anchor_class = cls;
    }
  const double anchor_fraction = target.of(result.anchor_class);
  if (anchor_count > 0 && anchor_fraction == 0.0)
    throw DataError("bias_correct: target fraction of the most abundant class " + std::to_string(result.anchor_class) +
                    " is zero");
  result.planned_total = anchor_count > 0 ? std::llround(static_cast<double>(anchor_count) / anchor_fraction) : 0;

  result.combined.assign(polygons.begin(), polygons.end());
  std::map<int, std::vector<const RankedPoint*>> by_class;
  for (const auto& r : ranked) by_class[r.point.toplevel].push_back(&r);

  for (const auto& [cls, n] : polygon_counts) {
    ClassTally& tally = result.tally[cls];
    tally.polygons = n;
    const long long goal = std::llround(static_cast<double>(result.planned_total) * target.of(cls));
    tally.needed = std::max(0LL, goal - n);
    const auto& supply = by_class[cls];
    tally.added = std::min<long long>(tally.needed, static_cast<long long>(supply.size()));
    tally.shortfall = tally.needed - tally.added;
    if (tally.shortfall > 0)
      spdlog::warn("bias_correct: class {} needs {} points but only {} are available", cls, tally.needed, supply.size());
    for (long long k = 0; k < tally.added; ++k) result.combined.push_back(supply[static_cast<std::size_t>(k)]->point);
  }

  std::map<int, long long> final_counts;
  for (const auto& p : result.combined) ++final_counts[p.toplevel];
  for (const auto& [cls, n] : polygon_counts) {
    (void)n;
    result.realized[cls] = result.combined.empty() ? 0.0
                                                   : static_cast<double>(final_counts[cls]) /
                                                         static_cast<double>(result.combined.size());
  }
  return result;
}

namespace {

std::vector<std::pair<ReferencePoint, std::optional<double>>> read_points(const std::filesystem::path& path) {
  csv::Table t = csv::read(path);
  const auto c_id = t.column("id"), c_x = t.column("x"), c_y = t.column("y"), c_code = t.column("lc1_code"),
             c_src = t.column("source"), c_area = t.column("parcel_area_class"), c_cover = t.column("cover_percent");
  const auto c_vote = t.find_column("vote_fraction");
  std::vector<std::pair<ReferencePoint, std::optional<double>>> out;
  const std::string ctx = path.string();
  for (const auto& row : t.rows) {
    std::optional<double> cover;
    if (!row[c_cover].empty() && row[c_cover] != "NA" && row[c_cover] != "unknown")
      cover = csv::parse_double(row[c_cover], ctx + ": cover_percent");
    auto p = ReferencePoint::make(row[c_id], csv::parse_double(row[c_x], ctx + ": x"),
                                  csv::parse_double(row[c_y], ctx + ": y"), row[c_code],
                                  parse_point_source(row[c_src]), parse_parcel_area(row[c_area]), cover);
    std::optional<double> vote;
    if (c_vote && !row[*c_vote].empty()) vote = csv::parse_double(row[*c_vote], ctx + ": vote_fraction");
    out.emplace_back(std::move(p), vote);
  }
  return out;
}

std::vector<std::string> point_fields(const ReferencePoint& p) {
  return {p.id,
          csv::format_double(p.x),
          csv::format_double(p.y),
          p.lc1_code,
          std::string(source_name(p.source)),
          std::string(parcel_area_name(p.parcel_area)),
          p.cover_percent ? csv::format_double(*p.cover_percent) : std::string()};
}

const std::vector<std::string> kPointHeader = {"id", "x", "y", "lc1_code", "source", "parcel_area_class", "cover_percent"};

}  // namespace

std::vector<ReferencePoint> read_reference_csv(const std::filesystem::path& path) {
  std::vector<ReferencePoint> out;
  for (auto& [p, _] : read_points(path)) out.push_back(std::move(p));
  return out;
}

std::vector<RankedPoint> read_ranked_csv(const std::filesystem::path& path) {
  std::vector<RankedPoint> out;
  for (auto& [p, vote] : read_points(path)) {
    if (!vote) throw DataError(path.string() + ": point " + p.id + " has no vote_fraction");
    out.push_back({std::move(p), *vote});
  }
  return out;
}

void write_reference_csv(std::span<const ReferencePoint> points, const std::filesystem::path& path) {
  csv::Table t;
  t.header = kPointHeader;
  for (const auto& p : points) t.rows.push_back(point_fields(p));
  csv::write(path, t);
}

void write_ranked_csv(std::span<const RankedPoint> points, const std::filesystem::path& path) {
  csv::Table t;
  t.header = kPointHeader;
  t.header.push_back("vote_fraction");
  for (const auto& r : points) {
    auto fields = point_fields(r.point);
    fields.push_back(csv::format_double(r.vote_fraction));
    t.rows.push_back(std::move(fields));
  }
  csv::write(path, t);
}

}  // namespace landcover::reference
