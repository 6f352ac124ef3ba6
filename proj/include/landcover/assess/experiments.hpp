#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "landcover/rf/forest.hpp"

namespace landcover::assess {

using features::FeatureMatrix;

struct CurveRow {
  double fraction = 0;
  int class_id = 0;  // 0 = overall accuracy, otherwise per-class OOB recall
  double mean = 0;   // percent
  double variance = 0;
  std::size_t runs = 0;
  std::size_t samples = 0;  // rows in the subsample
};

struct SampleSizeCurve {
  std::vector<CurveRow> rows;
  std::vector<double> fractions;  // evaluated, descending
  /// First fraction that would drop a class entirely; evaluation stops before it.
  std::optional<double> stopped_at;
};

/// Fractions 1, 1-step, ... (> 0) rounded to 1e-9.
std::vector<double> curve_fractions(double step);

/// Stratified subsample keeping round(fraction * n_c) rows of every class;
/// selected rows keep their original order.
FeatureMatrix stratified_subsample(const FeatureMatrix& matrix, double fraction, std::uint64_t seed);

/// Per fraction and bootstrap b: subsample seeded by (seed, fraction index, b),
/// forest seed params.seed for b = 0 and derive_seed(params.seed, b) after.
SampleSizeCurve sample_size_curve(const FeatureMatrix& matrix, double step = 0.05, int bootstraps = 10,
                                  const rf::ForestParams& params = {});

void write_curve_csv(const SampleSizeCurve& curve, const std::filesystem::path& path);

struct ClassScore {
  int class_id = 0;
  std::optional<double> recall;  // percent
};

struct VariantScore {
  double oa = 0;  // OOB percent
  std::vector<ClassScore> per_class;
};

/// OOB overall accuracy and per-class recall of a freshly trained forest.
VariantScore evaluate_variant(const FeatureMatrix& matrix, const rf::ForestParams& params);

using ChosenOptions = std::map<std::string, std::string>;  // question id -> chosen option

struct AblationOption {
  std::string name;
  std::function<FeatureMatrix(const ChosenOptions&)> build;
};

struct AblationQuestion {
  std::string id;
  std::vector<AblationOption> options;
};

struct SizeQuestion {
  std::string id = "Q6";
  std::function<FeatureMatrix(const ChosenOptions&)> build;
  double step = 0.05;
  int bootstraps = 10;
};

struct AblationPlan {
  std::vector<AblationQuestion> questions;  // evaluated in order
  std::optional<SizeQuestion> sample_size;
  rf::ForestParams params;
};

struct AblationRow {
  std::string question;
  std::string option;
  VariantScore score;
  bool chosen = false;
};

struct AblationReport {
  std::vector<AblationRow> rows;
  ChosenOptions chosen;
  std::optional<SampleSizeCurve> curve;
};

/// The highest-OA option of each question (first listed wins ties) is passed
/// to the builders of every later question.
AblationReport ablation_run(const AblationPlan& plan);

void write_ablation_csv(const AblationReport& report, const std::filesystem::path& path);

}  // namespace landcover::assess
