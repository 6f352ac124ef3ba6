#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "landcover/features/feature_matrix.hpp"
#include "landcover/reference/catalog.hpp"
#include "landcover/rf/forest.hpp"

namespace landcover::reference {

enum class PointSource { polygon_centroid, grid_point };
enum class ParcelArea { lt_0_5ha, ge_0_5ha, unknown };

std::string_view source_name(PointSource s);
PointSource parse_point_source(std::string_view s);
std::string_view parcel_area_name(ParcelArea a);
ParcelArea parse_parcel_area(std::string_view s);

struct ReferencePoint {
  std::string id;
  double x = 0;
  double y = 0;
  std::string lc1_code;
  int toplevel = 0;
  PointSource source = PointSource::grid_point;
  ParcelArea parcel_area = ParcelArea::unknown;
  std::optional<double> cover_percent;

  /// Builds a point with toplevel derived from the code.
  static ReferencePoint make(std::string id, double x, double y, std::string lc1_code, PointSource source,
                             ParcelArea area = ParcelArea::unknown, std::optional<double> cover = std::nullopt);
};

struct RankedPoint {
  ReferencePoint point;
  double vote_fraction = 0;
};

/// LC1 codes excluded from training: A22, A39, B55, E30, F40.
const std::vector<std::string>& excluded_codes();

enum class RejectReason { parcel_area, cover_percent, excluded_class };
std::string_view reject_reason_name(RejectReason r);

struct Rejection {
  ReferencePoint point;
  RejectReason reason;
};

struct MetadataFilterResult {
  std::vector<ReferencePoint> kept;
  std::vector<Rejection> rejected;
};

/// Grid points are rejected for parcels < 0.5 ha, cover < 50 % or an
/// excluded code (first match in that order). Polygon centroids pass.
MetadataFilterResult metadata_filter(std::span<const ReferencePoint> points);

/// Vote-fraction ranking. Each of `bootstraps` forests is trained on the
/// whole matrix (rows canonicalised by id) with seed derive_seed(params.seed, b);
/// a point's score is the mean over runs of the fraction of trees voting its
/// labelled class (the scored point is part of every training set).
/// Sorted by descending score, ties by class order then id.
std::vector<RankedPoint> outlier_rank(std::span<const ReferencePoint> points, const features::FeatureMatrix& matrix,
                                      int bootstraps, const rf::ForestParams& params);

/// Class id -> target fraction.
struct TargetProportions {
  std::map<int, double> fractions;

  void validate() const;
  double of(int class_id) const;
  static TargetProportions read_json(const std::filesystem::path& path);
};

struct ClassTally {
  long long polygons = 0;
  long long needed = 0;
  long long added = 0;
  long long shortfall = 0;
};

struct BiasCorrectionResult {
  std::vector<ReferencePoint> combined;
  int anchor_class = 0;
  long long planned_total = 0;  // T
  std::map<int, ClassTally> tally;
  /// Class share of the combined sample.
  std::map<int, double> realized;
};

/// Supplements polygons with the top-ranked points of each class so the
/// composition follows `target`, anchored on the most abundant polygon class:
/// T = round(n*/p*), need_c = max(0, round(T p_c) - n_c).
BiasCorrectionResult bias_correct(std::span<const ReferencePoint> polygons, std::span<const RankedPoint> ranked,
                                  const TargetProportions& target);

// CSV: id,x,y,lc1_code,source,parcel_area_class,cover_percent[,vote_fraction]
std::vector<ReferencePoint> read_reference_csv(const std::filesystem::path& path);
std::vector<RankedPoint> read_ranked_csv(const std::filesystem::path& path);
void write_reference_csv(std::span<const ReferencePoint> points, const std::filesystem::path& path);
void write_ranked_csv(std::span<const RankedPoint> points, const std::filesystem::path& path);

}  // namespace landcover::reference
