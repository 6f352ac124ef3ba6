#include "landcover/cli/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "landcover/core/error.hpp"
#include "landcover/assess/reclass.hpp"
#include "landcover/rf/selection.hpp"

namespace landcover::cli {

using nlohmann::json;

namespace {

class Reader {
 public:
  explicit Reader(std::vector<std::string>& errors) : errors_(errors) {}

  void error(const std::string& field, const std::string& what) { errors_.push_back(field + ": " + what); }

  /// Returns the section object, or nullptr when absent or not an object.
  const json* section(const json& doc, const std::string& key, std::initializer_list<const char*> allowed) {
    if (!doc.contains(key)) return nullptr;
    const json& s = doc.at(key);
    if (!s.is_object()) {
      error(key, "must be an object");
      return nullptr;
    }
    check_keys(s, key + ".", allowed);
    return &s;
  }

  void check_keys(const json& obj, const std::string& prefix, std::initializer_list<const char*> allowed) {
    for (const auto& [k, v] : obj.items()) {
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }))
        error(prefix + k, "unknown key");
    }
  }

  void integer(const json* obj, const std::string& prefix, const char* key, int& dst, long long min,
               long long max = 1LL << 31) {
    if (!obj || !obj->contains(key)) return;
    const json& v = obj->at(key);
    const std::string field = prefix + key;
    if (!v.is_number_integer()) return error(field, "must be an integer");
    const auto x = v.get<long long>();
    if (x < min) return error(field, "must be >= " + std::to_string(min));
    if (x >= max) return error(field, "must be < " + std::to_string(max));
    dst = static_cast<int>(x);
  }

  void number(const json* obj, const std::string& prefix, const char* key, double& dst, double min, double max,
              bool min_open = false) {
    if (!obj || !obj->contains(key)) return;
    const json& v = obj->at(key);
    const std::string field = prefix + key;
    if (!v.is_number()) return error(field, "must be a number");
    const double x = v.get<double>();
    if (x < min || x > max || (min_open && x == min))
      return error(field, "must be in " + std::string(min_open ? "(" : "[") + std::to_string(min) + ", " +
                              std::to_string(max) + "]");
    dst = x;
  }

  void boolean(const json* obj, const std::string& prefix, const char* key, bool& dst) {
    if (!obj || !obj->contains(key)) return;
    const json& v = obj->at(key);
    if (!v.is_boolean()) return error(prefix + key, "must be a boolean");
    dst = v.get<bool>();
  }

  bool string(const json* obj, const std::string& prefix, const char* key, std::string& dst) {
    if (!obj || !obj->contains(key)) return false;
    const json& v = obj->at(key);
    if (!v.is_string()) {
      error(prefix + key, "must be a string");
      return false;
    }
    dst = v.get<std::string>();
    return true;
  }

  void int_list(const json* obj, const std::string& prefix, const char* key, std::vector<int>& dst, int min) {
    if (!obj || !obj->contains(key)) return;
    const json& v = obj->at(key);
    const std::string field = prefix + key;
    if (!v.is_array() || v.empty()) return error(field, "must be a non-empty array of integers");
    std::vector<int> out;
    for (const auto& e : v) {
      if (!e.is_number_integer() || e.get<long long>() < min)
        return error(field, "entries must be integers >= " + std::to_string(min));
      out.push_back(e.get<int>());
    }
    dst = std::move(out);
  }

 private:
  std::vector<std::string>& errors_;
};

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

}  // namespace

ConfigResult parse_config(const json& doc, const fs::path& base_dir) {
  ConfigResult result;
  auto& errors = result.errors;
  Reader rd(errors);
  if (!doc.is_object()) {
    errors.push_back("config: top level must be an object");
    return result;
  }
  rd.check_keys(doc, "", {"seed", "threads", "out", "inputs", "optical", "radar", "fusion", "rf", "rank", "rfe",
                          "tune", "curve", "grid", "reclass", "ablation"});

  RunConfig cfg;
  cfg.tune_ntree_grid = rf::default_ntree_grid();
  cfg.tune_mtry_grid = rf::default_mtry_grid();

  if (doc.contains("seed")) {
    const json& s = doc.at("seed");
    if (s.is_number_unsigned() || (s.is_number_integer() && s.get<long long>() >= 0))
      cfg.seed = s.get<std::uint64_t>();
    else
      rd.error("seed", "must be a non-negative integer");
  }
  {
    int threads = 1;
    rd.integer(&doc, "", "threads", threads, 1, 1025);
    cfg.threads = static_cast<unsigned>(threads);
  }
  if (std::string out; rd.string(&doc, "", "out", out)) cfg.out = resolve(base_dir, out);

  if (const json* in = doc.contains("inputs") ? &doc.at("inputs") : nullptr) {
    if (!in->is_object()) {
      rd.error("inputs", "must be an object");
    } else {
      for (const auto& [k, v] : in->items()) {
        const auto& keys = input_keys();
        if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
          rd.error("inputs." + k, "unknown input");
        } else if (!v.is_string() || v.get<std::string>().empty()) {
          rd.error("inputs." + k, "must be a non-empty path string");
        } else {
          cfg.inputs[k] = resolve(base_dir, v.get<std::string>());
        }
      }
    }
  }

  if (const json* o = rd.section(doc, "optical", {"scene_cloud_max", "cloud_threshold", "texture_window", "percentiles",
                                                  "bands", "indices", "seasonal_ndvi", "ndvi_texture"})) {
    rd.number(o, "optical.", "scene_cloud_max", cfg.scene_cloud_max, 0.0, 1.0);
    rd.number(o, "optical.", "cloud_threshold", cfg.cloud_threshold, 0.0, 100.0);
    rd.integer(o, "optical.", "texture_window", cfg.optical.texture_window, 2);
    rd.boolean(o, "optical.", "seasonal_ndvi", cfg.optical.seasonal_ndvi);
    rd.boolean(o, "optical.", "ndvi_texture", cfg.optical.ndvi_texture);
    if (o->contains("percentiles")) {
      const json& ps = o->at("percentiles");
      bool ok = ps.is_array() && !ps.empty();
      std::vector<double> out;
      if (ok)
        for (const auto& p : ps) {
          if (!p.is_number() || p.get<double>() < 0 || p.get<double>() > 1) ok = false;
          else out.push_back(p.get<double>());
        }
      if (ok) cfg.optical.percentiles = out;
      else rd.error("optical.percentiles", "must be a non-empty array of numbers in [0, 1]");
    }
    if (o->contains("bands")) {
      const json& bs = o->at("bands");
      bool ok = bs.is_array();
      std::vector<std::string> out;
      if (ok)
        for (const auto& b : bs) {
          if (!b.is_string()) ok = false;
          else out.push_back(b.get<std::string>());
        }
      if (ok) cfg.optical.bands = out;
      else rd.error("optical.bands", "must be an array of band names");
    }
    if (o->contains("indices")) {
      const json& is = o->at("indices");
      std::vector<optical::SpectralIndex> out;
      bool ok = is.is_array();
      if (ok)
        for (const auto& i : is) {
          try {
            out.push_back(optical::parse_index(i.is_string() ? i.get<std::string>() : std::string()));
          } catch (const Error&) {
            ok = false;
          }
        }
      if (ok) cfg.optical.indices = out;
      else rd.error("optical.indices", "must be an array of ndvi, nbr, ndbi, ndsi");
    }
  }

  if (const json* r = rd.section(doc, "radar", {"speckle_filter", "window", "enl", "k_sigma", "min_selected"})) {
    rd.boolean(r, "radar.", "speckle_filter", cfg.radar.speckle_filter);
    rd.integer(r, "radar.", "window", cfg.radar.filter.window, 3);
    if (cfg.radar.filter.window % 2 == 0) rd.error("radar.window", "must be odd");
    rd.number(r, "radar.", "enl", cfg.radar.filter.enl, 0.0, 1e6, true);
    rd.number(r, "radar.", "k_sigma", cfg.radar.filter.k_sigma, 0.0, 100.0, true);
    rd.integer(r, "radar.", "min_selected", cfg.radar.filter.min_selected, 1);
  }

  if (std::string f; rd.string(&doc, "", "fusion", f)) {
    try {
      cfg.fusion = features::parse_fusion(f);
    } catch (const Error&) {
      rd.error("fusion", "must be one of s1_only, s2_only, s1s2, s1s2_aux");
    }
  }

  if (const json* r = rd.section(doc, "rf", {"ntree", "mtry", "importance_bootstraps"})) {
    rd.integer(r, "rf.", "ntree", cfg.ntree, 1);
    rd.integer(r, "rf.", "mtry", cfg.mtry, 0);
    rd.integer(r, "rf.", "importance_bootstraps", cfg.importance_bootstraps, 0);
  }
  if (const json* r = rd.section(doc, "rank", {"bootstraps", "ntree"})) {
    rd.integer(r, "rank.", "bootstraps", cfg.rank_bootstraps, 1);
    rd.integer(r, "rank.", "ntree", cfg.rank_ntree, 1);
  }
  if (const json* r = rd.section(doc, "rfe", {"target", "drop_fraction"})) {
    rd.integer(r, "rfe.", "target", cfg.rfe_target, 1);
    rd.number(r, "rfe.", "drop_fraction", cfg.rfe_drop_fraction, 0.0, 1.0, true);
  }
  if (const json* t = rd.section(doc, "tune", {"ntree_grid", "mtry_grid"})) {
    rd.int_list(t, "tune.", "ntree_grid", cfg.tune_ntree_grid, 1);
    rd.int_list(t, "tune.", "mtry_grid", cfg.tune_mtry_grid, 1);
  }
  if (const json* c = rd.section(doc, "curve", {"step", "bootstraps"})) {
    rd.number(c, "curve.", "step", cfg.curve_step, 0.0, 1.0, true);
    rd.integer(c, "curve.", "bootstraps", cfg.curve_bootstraps, 1);
  }
  if (const json* g = rd.section(doc, "grid", {"cell_size", "min_n"})) {
    rd.number(g, "grid.", "cell_size", cfg.grid_cell_size, 0.0, 1e12, true);
    rd.integer(g, "grid.", "min_n", cfg.grid_min_n, 1);
  }
  if (const json* r = rd.section(doc, "reclass", {"legend"})) {
    if (rd.string(r, "reclass.", "legend", cfg.reclass_legend)) {
      const auto legends = assess::builtin_legends();
      if (std::find(legends.begin(), legends.end(), cfg.reclass_legend) == legends.end())
        rd.error("reclass.legend", "unknown legend '" + cfg.reclass_legend + "'");
    }
  }
  if (const json* a = rd.section(doc, "ablation", {"questions", "sample_size_matrix"})) {
    if (std::string m; rd.string(a, "ablation.", "sample_size_matrix", m)) cfg.ablation.sample_size_matrix = m;
    if (a->contains("questions")) {
      const json& qs = a->at("questions");
      if (!qs.is_array()) rd.error("ablation.questions", "must be an array");
      else {
        std::set<std::string> ids;
        for (std::size_t qi = 0; qi < qs.size(); ++qi) {
          const std::string prefix = "ablation.questions[" + std::to_string(qi) + "].";
          const json& q = qs[qi];
          if (!q.is_object()) {
            rd.error(prefix.substr(0, prefix.size() - 1), "must be an object");
            continue;
          }
          rd.check_keys(q, prefix, {"id", "options"});
          AblationQuestionConfig qc;
          if (!rd.string(&q, prefix, "id", qc.id) || qc.id.empty()) rd.error(prefix + "id", "required");
          else if (!ids.insert(qc.id).second) rd.error(prefix + "id", "duplicate question id '" + qc.id + "'");
          const json* opts = q.contains("options") ? &q.at("options") : nullptr;
          if (!opts || !opts->is_array() || opts->empty()) {
            rd.error(prefix + "options", "must be a non-empty array");
          } else {
            for (std::size_t oi = 0; oi < opts->size(); ++oi) {
              const std::string op = prefix + "options[" + std::to_string(oi) + "].";
              const json& o = (*opts)[oi];
              AblationOptionConfig oc;
              if (!o.is_object() || !rd.string(&o, op, "name", oc.name) || !rd.string(&o, op, "matrix", oc.matrix)) {
                rd.error(op.substr(0, op.size() - 1), "needs string fields name and matrix");
                continue;
              }
              rd.check_keys(o, op, {"name", "matrix"});
              qc.options.push_back(std::move(oc));
            }
          }
          cfg.ablation.questions.push_back(std::move(qc));
        }
      }
    }
  }

  if (errors.empty()) {
    // Ablation matrix templates are resolved when the placeholders are filled.
    for (auto& q : cfg.ablation.questions)
      for (auto& o : q.options) o.matrix = resolve(base_dir, o.matrix).string();
    if (cfg.ablation.sample_size_matrix)
      cfg.ablation.sample_size_matrix = resolve(base_dir, *cfg.ablation.sample_size_matrix).string();
    result.config = std::move(cfg);
  }
  return result;
}

ConfigResult validate_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) return {std::nullopt, {"config: cannot read " + path.string()}};
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    return {std::nullopt, {"config: " + path.string() + ": " + e.what()}};
  }
  return parse_config(doc, path.parent_path());
}

std::vector<std::string> missing_inputs(const RunConfig& config) {
  std::vector<std::string> missing;
  for (const auto& [key, p] : config.inputs)
    if (!fs::exists(p)) missing.push_back("inputs." + key + ": " + p.string() + " does not exist");
  return missing;
}

nlohmann::json RunConfig::to_json() const {
  json j;
  j["seed"] = seed ? json(*seed) : json(nullptr);
  j["threads"] = threads;
  j["out"] = out.string();
  j["inputs"] = json::object();
  for (const auto& [k, p] : inputs) j["inputs"][k] = p.string();
  json idx = json::array();
  for (auto i : optical.indices) idx.push_back(std::string(optical::index_name(i)));
  j["optical"] = {{"scene_cloud_max", scene_cloud_max}, {"cloud_threshold", cloud_threshold},
                  {"texture_window", optical.texture_window}, {"percentiles", optical.percentiles},
                  {"bands", optical.bands}, {"indices", idx}, {"seasonal_ndvi", optical.seasonal_ndvi},
                  {"ndvi_texture", optical.ndvi_texture}};
  j["radar"] = {{"speckle_filter", radar.speckle_filter}, {"window", radar.filter.window}, {"enl", radar.filter.enl},
                {"k_sigma", radar.filter.k_sigma}, {"min_selected", radar.filter.min_selected}};
  j["fusion"] = std::string(features::fusion_name(fusion));
  j["rf"] = {{"ntree", ntree}, {"mtry", mtry}, {"importance_bootstraps", importance_bootstraps}};
  j["rank"] = {{"bootstraps", rank_bootstraps}, {"ntree", rank_ntree}};
  j["rfe"] = {{"target", rfe_target}, {"drop_fraction", rfe_drop_fraction}};
  j["tune"] = {{"ntree_grid", tune_ntree_grid}, {"mtry_grid", tune_mtry_grid}};
  j["curve"] = {{"step", curve_step}, {"bootstraps", curve_bootstraps}};
  j["grid"] = {{"cell_size", grid_cell_size}, {"min_n", grid_min_n}};
  j["reclass"] = {{"legend", reclass_legend}};
  json qs = json::array();
  for (const auto& q : ablation.questions) {
    json opts = json::array();
    for (const auto& o : q.options) opts.push_back({{"name", o.name}, {"matrix", o.matrix}});
    qs.push_back({{"id", q.id}, {"options", opts}});
  }
  j["ablation"] = {{"questions", qs}};
  if (ablation.sample_size_matrix) j["ablation"]["sample_size_matrix"] = *ablation.sample_size_matrix;
  return j;
}

}  // namespace landcover::cli
