#include "landcover/cli/app.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "landcover/assess/area_stats.hpp"
#include "landcover/assess/confusion.hpp"
#include "landcover/assess/experiments.hpp"
#include "landcover/assess/grid_accuracy.hpp"
#include "landcover/assess/reclass.hpp"
#include "landcover/cli/config.hpp"
#include "landcover/core/csv.hpp"
#include "landcover/core/digest.hpp"
#include "landcover/core/error.hpp"
#include "landcover/core/parallel.hpp"
#include "landcover/raster/io.hpp"
#include "landcover/reference/reference.hpp"
#include "landcover/rf/importance.hpp"
#include "landcover/rf/selection.hpp"

namespace landcover::cli {

using nlohmann::json;
using features::FeatureMatrix;

namespace {

/// Configuration problem detected after parsing (exit code 1).
class UsageError : public Error {
 public:
  using Error::Error;
};

std::string digest_path(const fs::path& p) {
  if (!fs::is_directory(p)) return sha256_file(p);
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(p))
    if (e.is_regular_file()) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::string listing;
  for (const auto& f : files) listing += fs::relative(f, p).generic_string() + '\0' + sha256_file(f) + '\n';
  return sha256_hex(listing);
}

void write_atomic(const fs::path& path, const std::string& text) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + tmp.string());
    out << text;
    if (!out.flush()) throw DataError("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

class Stage {
 public:
  Stage(std::string name, RunConfig cfg) : name_(std::move(name)), cfg_(std::move(cfg)) {}

  const RunConfig& cfg() const { return cfg_; }
  const fs::path& out() const { return cfg_.out; }

  /// Declares which config inputs and settings the stage needs; reports all gaps at once.
  void require(std::initializer_list<const char*> keys, bool needs_seed) {
    std::vector<std::string> problems;
    for (const char* k : keys)
      if (!cfg_.inputs.count(k)) problems.push_back("inputs." + std::string(k) + ": required by " + name_);
    if (needs_seed && !cfg_.seed) problems.push_back("seed: required by " + name_ + " (no clock seeding)");
    fail_if(problems);
  }

  void fail_if(const std::vector<std::string>& problems) const {
    if (problems.empty()) return;
    std::string msg;
    for (const auto& p : problems) msg += (msg.empty() ? "" : "; ") + p;
    throw UsageError(msg);
  }

  std::uint64_t seed() const { return *cfg_.seed; }

  const fs::path& input(const std::string& key) {
    const fs::path& p = cfg_.inputs.at(key);
    record_input(key, p);
    return p;
  }

  void record_input(const std::string& key, const fs::path& p) {
    if (!fs::exists(p)) throw DataError("input " + key + " not found: " + p.string());
    inputs_.push_back({{"key", key}, {"path", p.string()}, {"sha256", digest_path(p)}});
  }

  fs::path output(const std::string& rel) {
    fs::create_directories(out());
    outputs_.push_back(rel);
    return out() / rel;
  }

  void add_note(const std::string& key, json value) { notes_[key] = std::move(value); }

  void finish(double seconds) const {
    json outputs = json::array();
    for (const auto& rel : outputs_) {
      const fs::path p = out() / rel;
      if (fs::exists(p)) outputs.push_back({{"path", rel}, {"sha256", digest_path(p)}});
    }
    json manifest = {{"tool", "landcover"},
                     {"version", kVersion},
                     {"stage", name_},
                     {"config", cfg_.to_json()},
                     {"inputs", inputs_},
                     {"outputs", outputs},
                     {"timings", {{"stage_seconds", seconds}}}};
    if (!notes_.empty()) manifest["notes"] = notes_;
    fs::create_directories(out());
    write_atomic(out() / "run_manifest.json", manifest.dump(2) + "\n");
  }

  rf::ForestParams forest_params() const { return {cfg_.ntree, cfg_.mtry, cfg_.seed.value_or(0)}; }

  FeatureMatrix matrix(const std::string& key = "matrix") {
    FeatureMatrix m = features::read_matrix_csv(input(key));
    if (!m.has_labels()) throw DataError(cfg_.inputs.at(key).string() + ": training matrix needs labels");
    return m;
  }

 private:
  std::string name_;
  RunConfig cfg_;
  json inputs_ = json::array();
  std::vector<std::string> outputs_;
  json notes_ = json::object();
};

// --- stages ------------------------------------------------------------------

features::AuxLayerSet read_aux(const fs::path& dir) {
  features::AuxLayerSet aux;
  for (const auto& name : features::AuxLayerSet::layer_names()) aux.get(name) = read_raster(dir / (name + ".json"));
  return aux;
}

void stage_features(Stage& st) {
  const auto fusion = st.cfg().fusion;
  const bool s2 = fusion != features::Fusion::s1_only;
  const bool s1 = fusion != features::Fusion::s2_only;
  const bool aux = fusion == features::Fusion::s1s2_aux;
  std::vector<std::string> problems;
  for (auto [need, key] : {std::pair{s2, "optical_stack"}, std::pair{s1, "radar_stack"}, std::pair{aux, "aux_dir"}})
    if (need && !st.cfg().inputs.count(key))
      problems.push_back("inputs." + std::string(key) + ": required by features with fusion " +
                         std::string(features::fusion_name(fusion)));
  st.fail_if(problems);
  st.require({"reference_csv"}, false);

  std::optional<features::FeatureCube> opt_cube, sar_cube;
  std::optional<features::AuxLayerSet> aux_set;
  if (s2) {
    SceneStack stack = read_stack(st.input("optical_stack"));
    auto filtered = optical::scene_cloud_filter(stack, st.cfg().scene_cloud_max);
    spdlog::info("optical: {} scenes kept, {} cloudy, {} without metadata", filtered.stack.size(),
                 filtered.rejected_cloudy, filtered.rejected_missing_metadata);
    st.add_note("optical_scenes_kept", filtered.stack.size());
    opt_cube = optical::optical_feature_set(optical::mask_clouds(filtered.stack, st.cfg().cloud_threshold),
                                            st.cfg().optical);
  }
  if (s1) sar_cube = radar::radar_feature_set(read_stack(st.input("radar_stack")), st.cfg().radar);
  if (aux) aux_set = read_aux(st.input("aux_dir"));

  const features::FeatureCube cube = features::assemble(opt_cube ? &*opt_cube : nullptr, sar_cube ? &*sar_cube : nullptr,
                                                        aux_set ? &*aux_set : nullptr, fusion);
  features::write_cube(cube, st.output("cube"));

  const auto refs = reference::read_reference_csv(st.input("reference_csv"));
  std::vector<features::SamplePoint> pts;
  pts.reserve(refs.size());
  for (const auto& r : refs) pts.push_back({r.x, r.y, r.toplevel, r.id});
  const auto sampled = features::sample_at(cube, pts);
  spdlog::info("features: {} layers, {} samples ({} nodata, {} outside)", cube.names().size(), sampled.matrix.rows(),
               sampled.dropped_nodata, sampled.dropped_outside);
  st.add_note("dropped_nodata", sampled.dropped_nodata);
  st.add_note("dropped_outside", sampled.dropped_outside);
  features::write_matrix_csv(sampled.matrix, st.output("features.csv"));
}

void stage_clean_ref(Stage& st) {
  st.require({"reference_csv"}, false);
  const auto points = reference::read_reference_csv(st.input("reference_csv"));
  const auto result = reference::metadata_filter(points);
  reference::write_reference_csv(result.kept, st.output("reference_clean.csv"));
  csv::Table t;
  t.header = {"id", "lc1_code", "reason"};
  for (const auto& r : result.rejected)
    t.rows.push_back({r.point.id, r.point.lc1_code, std::string(reference::reject_reason_name(r.reason))});
  csv::write(st.output("rejected.csv"), t);
  spdlog::info("clean-ref: kept {}, rejected {}", result.kept.size(), result.rejected.size());
}

void stage_rank(Stage& st) {
  st.require({"reference_csv", "matrix"}, true);
  const auto points = reference::read_reference_csv(st.input("reference_csv"));
  const FeatureMatrix m = features::read_matrix_csv(st.input("matrix"));
  rf::ForestParams p{st.cfg().rank_ntree, st.cfg().mtry, st.seed()};
  const auto ranked = reference::outlier_rank(points, m, st.cfg().rank_bootstraps, p);
  reference::write_ranked_csv(ranked, st.output("ranked.csv"));
}

void stage_bias_correct(Stage& st) {
  st.require({"polygons_csv", "ranked_csv", "target_proportions"}, false);
  const auto polygons = reference::read_reference_csv(st.input("polygons_csv"));
  const auto ranked = reference::read_ranked_csv(st.input("ranked_csv"));
  const auto target = reference::TargetProportions::read_json(st.input("target_proportions"));
  const auto result = reference::bias_correct(polygons, ranked, target);
  reference::write_reference_csv(result.combined, st.output("reference_corrected.csv"));
  csv::Table t;
  t.header = {"class_id", "polygons", "needed", "added", "shortfall", "target", "realized"};
  for (const auto& [c, tally] : result.tally)
    t.rows.push_back({std::to_string(c), std::to_string(tally.polygons), std::to_string(tally.needed),
                      std::to_string(tally.added), std::to_string(tally.shortfall), csv::format_double(target.of(c)),
                      csv::format_double(result.realized.count(c) ? result.realized.at(c) : 0.0)});
  csv::write(st.output("bias_tally.csv"), t);
  st.add_note("anchor_class", result.anchor_class);
  st.add_note("planned_total", result.planned_total);
  st.add_note("combined_total", result.combined.size());
}

void stage_train(Stage& st) {
  st.require({"matrix"}, true);
  const FeatureMatrix m = st.matrix();
  const auto params = st.forest_params();
  const rf::Forest forest = rf::train(m, params);
  forest.save(st.output("model.json"));

  const auto oob = rf::oob_evaluate(forest, m);
  csv::Table t;
  t.header = {"id", "label", "oob_prediction"};
  for (std::size_t i = 0; i < m.rows(); ++i)
    t.rows.push_back({m.id(i), std::to_string(m.label(i)),
                      oob.predictions[i] ? std::to_string(*oob.predictions[i]) : std::string()});
  csv::write(st.output("oob_predictions.csv"), t);

  json report = {{"ntree", forest.ntree()},
                 {"mtry", forest.mtry()},
                 {"mtry_exact", std::sqrt(static_cast<double>(m.cols()))},
                 {"seed", forest.seed()},
                 {"oob_accuracy", oob.accuracy},
                 {"oob_scored", oob.scored},
                 {"never_oob", oob.never_oob}};
  write_json(st.output("train_report.json"), report);
  spdlog::info("train: OOB accuracy {:.4f} over {} samples", oob.accuracy, oob.scored);

  if (st.cfg().importance_bootstraps > 0) {
    const auto imp = rf::importance(forest, m, st.cfg().importance_bootstraps);
    csv::Table it;
    it.header = {"feature", "mean_decrease_accuracy", "mda_se", "mean_decrease_gini", "mdg_se"};
    for (const auto& f : imp.features)
      it.rows.push_back({f.name, csv::format_double(f.mda_mean), csv::format_double(f.mda_se),
                         csv::format_double(f.mdg_mean), csv::format_double(f.mdg_se)});
    csv::write(st.output("importance.csv"), it);
  }
}

void stage_tune(Stage& st) {
  st.require({"matrix"}, true);
  const FeatureMatrix m = st.matrix();
  const auto result = rf::tune(m, st.cfg().tune_ntree_grid, st.cfg().tune_mtry_grid, st.seed());
  csv::Table t;
  t.header = {"ntree", "mtry", "oob_error"};
  for (const auto& c : result.surface)
    t.rows.push_back({std::to_string(c.ntree), std::to_string(c.mtry), csv::format_double(c.oob_error)});
  csv::write(st.output("tune.csv"), t);
  write_json(st.output("tune_best.json"),
             {{"ntree", result.best_ntree}, {"mtry", result.best_mtry}, {"oob_error", result.best_error}});
  spdlog::info("tune: best ntree {} mtry {} (OOB error {:.4f})", result.best_ntree, result.best_mtry,
               result.best_error);
}

void stage_rfe(Stage& st) {
  st.require({"matrix"}, true);
  const FeatureMatrix m = st.matrix();
  const auto result = rf::rfe(m, static_cast<std::size_t>(st.cfg().rfe_target), st.cfg().rfe_drop_fraction,
                              st.forest_params());
  csv::Table t;
  t.header = {"feature_count", "oob_accuracy", "features"};
  for (const auto& s : result.trace) {
    std::string names;
    for (const auto& f : s.features) names += (names.empty() ? "" : ";") + f;
    t.rows.push_back({std::to_string(s.feature_count), csv::format_double(s.oob_accuracy), names});
  }
  csv::write(st.output("rfe_trace.csv"), t);
  features::write_matrix_csv(m.select_features(result.selected), st.output("features_selected.csv"));
}

void stage_predict(Stage& st) {
  st.require({"model", "cube"}, false);
  const rf::Forest forest = rf::Forest::load(st.input("model"));
  const features::FeatureCube cube = features::read_cube(st.input("cube"));
  std::vector<const Raster*> layers;
  for (const auto& name : forest.feature_names()) layers.push_back(&cube.layer(name).raster);
  const GridSpec& grid = cube.grid();
  Raster map(grid);
  parallel_for(static_cast<std::size_t>(grid.height), [&](std::size_t r) {
    std::vector<double> row(layers.size());
    for (std::size_t c = 0; c < static_cast<std::size_t>(grid.width); ++c) {
      const std::size_t i = map.index(r, c);
      bool ok = true;
      for (std::size_t f = 0; f < layers.size() && ok; ++f) {
        ok = layers[f]->valid(i);
        row[f] = (*layers[f])[i];
      }
      if (ok) map[i] = forest.predict(row).class_id;
    }
  });
  write_raster(map, st.output("map.json"));
  st.output("map.bin");
}

void stage_assess(Stage& st, const std::optional<fs::path>& confusion_flag) {
  assess::ConfusionMatrix cm;
  if (confusion_flag) {
    st.record_input("confusion", *confusion_flag);
    cm = assess::read_confusion_csv(*confusion_flag);
  } else if (st.cfg().inputs.count("confusion")) {
    cm = assess::read_confusion_csv(st.input("confusion"));
  } else {
    st.require({"validation_csv"}, false);
    const auto samples = assess::read_validation_csv(st.input("validation_csv"));
    std::vector<int> pred, ref;
    for (const auto& s : samples) {
      pred.push_back(s.predicted);
      ref.push_back(s.reference);
    }
    cm = assess::confusion(pred, ref);
  }
  const auto report = assess::accuracy_report(cm);
  assess::write_confusion_csv(cm, st.output("confusion.csv"));
  assess::write_report_csv(report, st.output("accuracy.csv"));
  const std::string md = assess::format_report(cm, report);
  std::ofstream(st.output("accuracy_report.md")) << md;
  std::cout << md;
}

void stage_grid_acc(Stage& st) {
  st.require({"validation_csv"}, false);
  const auto samples = assess::read_validation_csv(st.input("validation_csv"));
  const auto result = assess::grid_accuracy(samples, st.cfg().grid_cell_size, static_cast<std::size_t>(st.cfg().grid_min_n));
  assess::write_grid_csv(result, st.output("grid_accuracy.csv"));
  assess::write_histogram_csv(result, st.output("grid_histogram.csv"));
  spdlog::info("grid-acc: {} cells, {} eligible", result.cells.size(), result.eligible);
}

void stage_area_stats(Stage& st) {
  st.require({"map", "units", "area_points"}, false);
  const Raster map = read_raster(st.input("map"));
  const Raster units = read_raster(st.input("units"));
  const fs::path pts_path = st.input("area_points");
  const csv::Table t = csv::read(pts_path);
  const auto ix = t.column("x"), iy = t.column("y"), ic = t.column("class_id");
  std::vector<assess::ReferenceSample> pts;
  for (const auto& row : t.rows)
    pts.push_back({csv::parse_double(row[ix], pts_path.string()), csv::parse_double(row[iy], pts_path.string()),
                   static_cast<int>(csv::parse_int(row[ic], pts_path.string()))});
  const auto report = assess::area_stats(map, units, pts);
  assess::write_area_stats_csv(report, st.output("area_stats.csv"));
  json per_class = json::object();
  const auto& catalog = reference::ClassCatalog::standard();
  for (std::size_t c = 0; c < catalog.size(); ++c) {
    const auto& fit = report.per_class[c];
    per_class[std::to_string(catalog.classes()[c].id)] =
        fit ? json{{"slope", fit->slope}, {"intercept", fit->intercept}, {"r2", fit->r2}} : json(nullptr);
  }
  write_json(st.output("area_summary.json"), {{"r2", report.pooled.r2},
                                              {"slope", report.pooled.slope},
                                              {"intercept", report.pooled.intercept},
                                              {"rmse", report.rmse},
                                              {"mae", report.mae},
                                              {"units", report.units.size()},
                                              {"excluded_no_valid_cells", report.excluded_no_valid_cells},
                                              {"excluded_no_points", report.excluded_no_points},
                                              {"per_class", per_class}});
}

void stage_curve(Stage& st) {
  st.require({"matrix"}, true);
  const FeatureMatrix m = st.matrix();
  const auto curve = assess::sample_size_curve(m, st.cfg().curve_step, st.cfg().curve_bootstraps, st.forest_params());
  assess::write_curve_csv(curve, st.output("curve.csv"));
  if (curve.stopped_at) st.add_note("curve_stopped_at", *curve.stopped_at);
}

void stage_reclass(Stage& st) {
  st.require({"map"}, false);
  assess::ReclassTable table;
  if (st.cfg().inputs.count("reclass_table")) {
    table = assess::read_reclass_json(st.input("reclass_table"));
  } else if (!st.cfg().reclass_legend.empty()) {
    table = assess::builtin_table(st.cfg().reclass_legend);
  } else {
    throw UsageError("reclass: set inputs.reclass_table or reclass.legend");
  }
  const Raster map = read_raster(st.input("map"));
  write_raster(assess::reclassify(map, table), st.output("reclassified.json"));
  st.output("reclassified.bin");
  assess::write_reclass_json(table, st.output("reclass_table.json"));
}

std::string fill_placeholders(std::string tmpl, const assess::ChosenOptions& chosen) {
  for (const auto& [q, opt] : chosen) {
    const std::string key = "{" + q + "}";
    for (auto pos = tmpl.find(key); pos != std::string::npos; pos = tmpl.find(key, pos + opt.size()))
      tmpl.replace(pos, key.size(), opt);
  }
  if (tmpl.find('{') != std::string::npos) throw UsageError("ablation: unresolved placeholder in " + tmpl);
  return tmpl;
}

void stage_ablate(Stage& st) {
  st.require({}, true);
  const auto& ab = st.cfg().ablation;
  if (ab.questions.empty() && !ab.sample_size_matrix) throw UsageError("ablation: no questions configured");
  assess::AblationPlan plan;
  plan.params = st.forest_params();
  auto loader = [&st](const std::string& key, std::string tmpl) {
    return [&st, key, tmpl](const assess::ChosenOptions& chosen) {
      const fs::path p = fill_placeholders(tmpl, chosen);
      st.record_input(key, p);
      FeatureMatrix m = features::read_matrix_csv(p);
      if (!m.has_labels()) throw DataError(p.string() + ": ablation matrix needs labels");
      return m;
    };
  };
  for (const auto& q : ab.questions) {
    assess::AblationQuestion aq{q.id, {}};
    for (const auto& o : q.options) aq.options.push_back({o.name, loader(q.id + "/" + o.name, o.matrix)});
    plan.questions.push_back(std::move(aq));
  }
  if (ab.sample_size_matrix) {
    assess::SizeQuestion sq;
    sq.build = loader("sample_size", *ab.sample_size_matrix);
    sq.step = st.cfg().curve_step;
    sq.bootstraps = st.cfg().curve_bootstraps;
    plan.sample_size = std::move(sq);
  }
  const auto report = assess::ablation_run(plan);
  assess::write_ablation_csv(report, st.output("ablation.csv"));
  write_json(st.output("ablation_chosen.json"), report.chosen);
  if (report.curve) assess::write_curve_csv(*report.curve, st.output("curve.csv"));
}

void configure_logging(const std::string& level) {
  auto logger = std::make_shared<spdlog::logger>("landcover", std::make_shared<spdlog::sinks::stderr_sink_mt>());
  logger->set_pattern("%Y-%m-%dT%H:%M:%S.%e %l %v");
  logger->set_level(spdlog::level::from_str(level));
  spdlog::set_default_logger(logger);
}

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Land cover classification pipeline", "landcover"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::optional<fs::path> config_path;
  std::optional<fs::path> out_flag;
  std::optional<unsigned> threads_flag;
  std::optional<std::uint64_t> seed_flag;
  std::string log_level = "info";
  std::optional<fs::path> confusion_flag;

  const std::vector<std::pair<const char*, const char*>> commands = {
      {"features", "Build feature cube and sample the reference points"},
      {"clean-ref", "Apply the reference metadata filter"},
      {"rank", "Rank reference points by forest vote fraction"},
      {"bias-correct", "Supplement polygons to match target class proportions"},
      {"train", "Train a random forest and report OOB accuracy"},
      {"tune", "Grid-search ntree and mtry by OOB error"},
      {"rfe", "Recursive feature elimination"},
      {"predict", "Classify a feature cube"},
      {"assess", "Confusion matrix and accuracy report"},
      {"grid-acc", "Overall accuracy per grid square"},
      {"area-stats", "Mapped vs reference area proportions per unit"},
      {"curve", "Accuracy against training sample size"},
      {"reclass", "Reclassify a map into the eight-class legend"},
      {"ablate", "Evaluate pre-processing options in sequence"}};
  const std::vector<std::string> levels = {"trace", "debug", "info", "warn", "error", "critical", "off"};
  for (const auto& [name, desc] : commands) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--out", out_flag, "Output directory");
    sub->add_option("--threads", threads_flag, "Worker threads")->check(CLI::Range(1u, 1024u));
    sub->add_option("--seed", seed_flag, "Seed override");
    sub->add_option("--log-level", log_level, "Log level")->check(CLI::IsMember(levels));
    if (std::string_view(name) == "assess")
      sub->add_option("--confusion", confusion_flag, "Confusion matrix CSV (prediction rows)");
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  configure_logging(log_level);
  const std::string command = app.get_subcommands().front()->get_name();

  RunConfig cfg;
  if (config_path) {
    auto result = validate_config(*config_path);
    if (!result.config) {
      for (const auto& e : result.errors) spdlog::error("config: {}", e);
      std::cerr << "invalid config " << config_path->string() << ":\n";
      for (const auto& e : result.errors) std::cerr << "  " << e << '\n';
      return kUsage;
    }
    cfg = std::move(*result.config);
  } else {
    cfg.tune_ntree_grid = rf::default_ntree_grid();
    cfg.tune_mtry_grid = rf::default_mtry_grid();
  }
  try {
    if (auto v = env("LANDCOVER_OUT")) cfg.out = *v;
    if (auto v = env("LANDCOVER_THREADS")) cfg.threads = static_cast<unsigned>(csv::parse_int(*v, "LANDCOVER_THREADS"));
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return kUsage;
  }
  if (out_flag) cfg.out = *out_flag;
  if (threads_flag) cfg.threads = *threads_flag;
  if (seed_flag) cfg.seed = *seed_flag;
  set_thread_count(cfg.threads == 0 ? 1 : cfg.threads);

  const auto t0 = std::chrono::steady_clock::now();
  try {
    const auto missing = missing_inputs(cfg);
    if (!missing.empty()) {
      for (const auto& m : missing) std::cerr << "missing input " << m << '\n';
      spdlog::error("{} missing input(s)", missing.size());
      return kDataError;
    }
    Stage st(command, cfg);
    spdlog::info("{}: output to {}", command, cfg.out.string());
    if (command == "features") stage_features(st);
    else if (command == "clean-ref") stage_clean_ref(st);
    else if (command == "rank") stage_rank(st);
    else if (command == "bias-correct") stage_bias_correct(st);
    else if (command == "train") stage_train(st);
    else if (command == "tune") stage_tune(st);
    else if (command == "rfe") stage_rfe(st);
    else if (command == "predict") stage_predict(st);
    else if (command == "assess") stage_assess(st, confusion_flag);
    else if (command == "grid-acc") stage_grid_acc(st);
    else if (command == "area-stats") stage_area_stats(st);
    else if (command == "curve") stage_curve(st);
    else if (command == "reclass") stage_reclass(st);
    else if (command == "ablate") stage_ablate(st);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    st.finish(secs);
    spdlog::info("{}: done in {:.3f} s", command, secs);
    return kOk;
  } catch (const UsageError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    spdlog::error("{}", e.what());
    return kUsage;
  } catch (const ArgumentError& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    spdlog::error("{}", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    spdlog::error("{}", e.what());
    return kDataError;
  }
}

int run(int argc, const char* const* argv) { return run(std::vector<std::string>(argv, argv + argc)); }

}  // namespace landcover::cli
