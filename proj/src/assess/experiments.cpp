#include "landcover/assess/experiments.hpp"

#include <cmath>
#include <map>

#include <spdlog/spdlog.h>

#include "landcover/core/csv.hpp"
#include "landcover/core/error.hpp"
#include "landcover/core/random.hpp"

namespace landcover::assess {

namespace {

constexpr std::uint64_t kSubsampleStream = 0x5355425341ULL;

struct MeanVar {
  double mean = 0, variance = 0;
};

MeanVar mean_var(const std::vector<double>& xs) {
  MeanVar mv;
  if (xs.empty()) return mv;
  for (double x : xs) mv.mean += x;
  mv.mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return mv;
  for (double x : xs) mv.variance += (x - mv.mean) * (x - mv.mean);
  mv.variance /= static_cast<double>(xs.size() - 1);
  return mv;
}

}  // namespace

std::vector<double> curve_fractions(double step) {
  if (!(step > 0) || step > 1) throw ArgumentError("sample-size curve: step must be in (0, 1]");
  std::vector<double> out;
  for (int k = 0;; ++k) {
    const double f = std::round((1.0 - k * step) * 1e9) / 1e9;
    if (f <= 0) break;
    out.push_back(f);
  }
  return out;
}

FeatureMatrix stratified_subsample(const FeatureMatrix& matrix, double fraction, std::uint64_t seed) {
  if (!matrix.has_labels()) throw DataError("stratified subsample: matrix has no labels");
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < matrix.rows(); ++i) by_class[matrix.label(i)].push_back(i);
  Rng rng(seed);
  std::vector<std::uint8_t> keep(matrix.rows(), 0);
  for (auto& [cls, rows] : by_class) {
    const auto take = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(rows.size())));
    shuffle(std::span<std::size_t>(rows), rng);
    for (std::size_t j = 0; j < take && j < rows.size(); ++j) keep[rows[j]] = 1;
  }
  std::vector<std::size_t> selected;
  for (std::size_t i = 0; i < keep.size(); ++i)
    if (keep[i]) selected.push_back(i);
  return matrix.select_rows(selected);
}

VariantScore evaluate_variant(const FeatureMatrix& matrix, const rf::ForestParams& params) {
  const rf::Forest forest = rf::train(matrix, params);
  const rf::OobResult oob = rf::oob_evaluate(forest, matrix);
  VariantScore score;
  score.oa = 100.0 * oob.accuracy;
  std::map<int, std::pair<std::size_t, std::size_t>> hits;  // class -> (correct, scored)
  for (int c : forest.classes()) hits[c] = {0, 0};
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    if (!oob.predictions[i]) continue;
    auto& h = hits[matrix.label(i)];
    ++h.second;
    h.first += *oob.predictions[i] == matrix.label(i);
  }
  for (const auto& [c, h] : hits) {
    ClassScore cs{c, std::nullopt};
    if (h.second > 0) cs.recall = 100.0 * static_cast<double>(h.first) / static_cast<double>(h.second);
    score.per_class.push_back(cs);
  }
  return score;
}

SampleSizeCurve sample_size_curve(const FeatureMatrix& matrix, double step, int bootstraps,
                                  const rf::ForestParams& params) {
  if (bootstraps < 1) throw ArgumentError("sample-size curve: bootstraps must be >= 1");
  if (!matrix.has_labels() || matrix.rows() == 0) throw DataError("sample-size curve: labelled matrix required");
  std::map<int, std::size_t> class_sizes;
  for (std::size_t i = 0; i < matrix.rows(); ++i) ++class_sizes[matrix.label(i)];

  SampleSizeCurve curve;
  const auto fractions = curve_fractions(step);
  const std::uint64_t sub_base = derive_seed(params.seed, kSubsampleStream);
  for (std::size_t k = 0; k < fractions.size(); ++k) {
    const double f = fractions[k];
    bool lost = false;
    for (const auto& [c, n] : class_sizes) lost |= std::llround(f * static_cast<double>(n)) == 0;
    if (lost) {
      curve.stopped_at = f;
      spdlog::warn("sample-size curve: fraction {} would drop a class; stopping", f);
      break;
    }
    std::vector<double> oa;
    std::map<int, std::vector<double>> recall;
    std::size_t samples = 0;
    for (int b = 0; b < bootstraps; ++b) {
      const FeatureMatrix sub = stratified_subsample(matrix, f, derive_seed(sub_base, k, static_cast<std::uint64_t>(b)));
      samples = sub.rows();
      rf::ForestParams p = params;
      if (b > 0) p.seed = derive_seed(params.seed, static_cast<std::uint64_t>(b));
      const VariantScore s = evaluate_variant(sub, p);
      oa.push_back(s.oa);
      for (const auto& cs : s.per_class)
        if (cs.recall) recall[cs.class_id].push_back(*cs.recall);
    }
    curve.fractions.push_back(f);
    const auto mv = mean_var(oa);
    curve.rows.push_back({f, 0, mv.mean, mv.variance, oa.size(), samples});
    for (const auto& [c, xs] : recall) {
      const auto cmv = mean_var(xs);
      curve.rows.push_back({f, c, cmv.mean, cmv.variance, xs.size(), samples});
    }
    spdlog::info("sample-size curve: fraction {} OA {:.2f} (var {:.4f})", f, mv.mean, mv.variance);
  }
  return curve;
}

void write_curve_csv(const SampleSizeCurve& curve, const std::filesystem::path& path) {
  csv::Table t;
  t.header = {"fraction", "class_id", "mean_accuracy", "variance", "runs", "samples"};
  for (const auto& r : curve.rows) {
    t.rows.push_back({csv::format_double(r.fraction), std::to_string(r.class_id), csv::format_double(r.mean),
                      csv::format_double(r.variance), std::to_string(r.runs), std::to_string(r.samples)});
  }
  csv::write(path, t);
}

AblationReport ablation_run(const AblationPlan& plan) {
  AblationReport report;
  for (const auto& q : plan.questions) {
    if (q.options.empty()) throw DataError("ablation: question " + q.id + " has no options");
    const std::size_t first_row = report.rows.size();
    for (const auto& opt : q.options) {
      if (!opt.build) throw DataError("ablation: " + q.id + "/" + opt.name + " has no input");
      const FeatureMatrix m = opt.build(report.chosen);
      AblationRow row{q.id, opt.name, evaluate_variant(m, plan.params), false};
      spdlog::info("ablation {} {}: OA {:.2f}", q.id, opt.name, row.score.oa);
      report.rows.push_back(std::move(row));
    }
    std::size_t best = first_row;
    for (std::size_t i = first_row + 1; i < report.rows.size(); ++i)
      if (report.rows[i].score.oa > report.rows[best].score.oa) best = i;
    report.rows[best].chosen = true;
    report.chosen[q.id] = report.rows[best].option;
  }
  if (plan.sample_size) {
    const auto& sq = *plan.sample_size;
    if (!sq.build) throw DataError("ablation: " + sq.id + " has no input");
    report.curve = sample_size_curve(sq.build(report.chosen), sq.step, sq.bootstraps, plan.params);
  }
  return report;
}

void write_ablation_csv(const AblationReport& report, const std::filesystem::path& path) {
  csv::Table t;
  t.header = {"question", "option", "class_id", "accuracy", "chosen"};
  for (const auto& r : report.rows) {
    t.rows.push_back({r.question, r.option, "0", csv::format_double(r.score.oa), r.chosen ? "1" : "0"});
    for (const auto& c : r.score.per_class)
      t.rows.push_back({r.question, r.option, std::to_string(c.class_id),
                        c.recall ? csv::format_double(*c.recall) : std::string(), r.chosen ? "1" : "0"});
  }
  csv::write(path, t);
}

}  // namespace landcover::assess
