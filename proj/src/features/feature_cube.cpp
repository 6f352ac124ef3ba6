#include "landcover/features/feature_cube.hpp"

#include <fstream>
#include <iterator>

#include <json.hpp>

#include "landcover/core/error.hpp"
#include "landcover/raster/io.hpp"

namespace landcover::features {

using nlohmann::json;
namespace fs = std::filesystem;

std::string_view source_name(LayerSource source) {
  switch (source) {
    case LayerSource::optical: return "optical";
    case LayerSource::radar: return "radar";
    case LayerSource::aux: return "aux";
  }
  return "";
}

LayerSource parse_source(std::string_view name) {
  if (name == "optical") return LayerSource::optical;
  if (name == "radar") return LayerSource::radar;
  if (name == "aux") return LayerSource::aux;
  throw DataError("unknown layer source '" + std::string(name) + "'");
}

void FeatureCube::add(std::string name, Raster raster, LayerSource source, std::string copied_from) {
  if (!(raster.grid() == grid_)) throw DataError("feature cube: layer '" + name + "' is on a different grid");
  if (contains(name)) throw DataError("feature cube: duplicate layer name '" + name + "'");
  layers_.emplace(std::move(name), FeatureLayer{std::move(raster), source, std::move(copied_from)});
}

const FeatureLayer& FeatureCube::layer(std::string_view name) const {
  auto it = layers_.find(name);
  if (it == layers_.end()) throw DataError("feature cube: no layer '" + std::string(name) + "'");
  return it->second;
}

std::vector<std::string> FeatureCube::names() const {
  std::vector<std::string> out;
  out.reserve(layers_.size());
  for (const auto& [name, _] : layers_) out.push_back(name);
  return out;
}

FeatureCube merge(const FeatureCube& a, const FeatureCube& b) {
  if (a.empty() && a.attributes().empty()) return b;
  if (b.empty() && b.attributes().empty()) return a;
  if (!(a.grid() == b.grid())) throw DataError("assemble: grid mismatch between feature cubes");
  FeatureCube out = a;
  for (const auto& [name, layer] : b.layers()) out.add(name, layer.raster, layer.source, layer.copied_from);
  for (const auto& [k, v] : b.attributes()) out.attributes().insert_or_assign(k, v);
  return out;
}

const std::vector<std::string>& AuxLayerSet::layer_names() {
  static const std::vector<std::string> names = {"elevation",     "nightlights",   "precip_mean_10y",
                                                 "precip_std_10y", "temp_mean_10y", "temp_std_10y"};
  return names;
}

const Raster& AuxLayerSet::get(std::string_view name) const {
  return const_cast<AuxLayerSet*>(this)->get(name);
}

Raster& AuxLayerSet::get(std::string_view name) {
  if (name == "elevation") return elevation;
  if (name == "precip_mean_10y") return precip_mean_10y;
  if (name == "precip_std_10y") return precip_std_10y;
  if (name == "temp_mean_10y") return temp_mean_10y;
  if (name == "temp_std_10y") return temp_std_10y;
  if (name == "nightlights") return nightlights;
  throw DataError("unknown auxiliary layer '" + std::string(name) + "'");
}

FeatureCube AuxLayerSet::to_cube(const GridSpec& grid, Resampling method) const {
  FeatureCube cube(grid);
  for (const auto& name : layer_names()) {
    const Raster& r = get(name);
    if (r.size() == 0) throw DataError("auxiliary layer '" + name + "' is empty");
    cube.add(name, r.grid() == grid ? r : resample_to(r, grid, method), LayerSource::aux);
  }
  return cube;
}

std::string_view fusion_name(Fusion fusion) {
  switch (fusion) {
    case Fusion::s1_only: return "s1_only";
    case Fusion::s2_only: return "s2_only";
    case Fusion::s1s2: return "s1s2";
    case Fusion::s1s2_aux: return "s1s2_aux";
  }
  return "";
}

Fusion parse_fusion(std::string_view name) {
  for (Fusion f : {Fusion::s1_only, Fusion::s2_only, Fusion::s1s2, Fusion::s1s2_aux})
    if (fusion_name(f) == name) return f;
  throw ArgumentError("unknown fusion option '" + std::string(name) + "'");
}

FeatureCube assemble(const FeatureCube* optical, const FeatureCube* radar, const AuxLayerSet* aux, Fusion fusion) {
  const bool want_optical = fusion != Fusion::s1_only;
  const bool want_radar = fusion != Fusion::s2_only;
  const bool want_aux = fusion == Fusion::s1s2_aux;
  if (want_optical && !optical) throw DataError("assemble: optical features required for " + std::string(fusion_name(fusion)));
  if (want_radar && !radar) throw DataError("assemble: radar features required for " + std::string(fusion_name(fusion)));
  if (want_aux && !aux) throw DataError("assemble: auxiliary layers required for s1s2_aux");

  FeatureCube out;
  if (want_optical) out = merge(out, *optical);
  if (want_radar) out = merge(out, *radar);
  if (want_aux) out = merge(out, aux->to_cube(out.grid()));
  out.attributes()["fusion"] = std::string(fusion_name(fusion));
  return out;
}

SampleResult sample_at(const FeatureCube& cube, const std::vector<SamplePoint>& points) {
  std::vector<const Raster*> layers;
  for (const auto& [_, layer] : cube.layers()) layers.push_back(&layer.raster);
  SampleResult result{FeatureMatrix(cube.names()), 0, 0};
  std::vector<double> row(layers.size());
  for (const auto& p : points) {
    auto cell = cube.grid().locate(p.x, p.y);
    if (!cell) {
      ++result.dropped_outside;
      continue;
    }
    bool complete = true;
    for (std::size_t j = 0; j < layers.size() && complete; ++j) {
      if (!layers[j]->valid(cell->row, cell->col)) complete = false;
      else row[j] = layers[j]->at(cell->row, cell->col);
    }
    if (!complete) {
      ++result.dropped_nodata;
      continue;
    }
    result.matrix.add_row(row, p.label, p.id);
  }
  return result;
}

void write_cube(const FeatureCube& cube, const fs::path& dir) {
  fs::create_directories(dir);
  json layers = json::object();
  for (const auto& [name, layer] : cube.layers()) {
    const std::string file = name + ".json";
    write_raster(layer.raster, dir / file);
    json entry = {{"file", file}, {"source", std::string(source_name(layer.source))}};
    if (!layer.copied_from.empty()) entry["copied_from"] = layer.copied_from;
    layers[name] = std::move(entry);
  }
  json m = json::object();
  m["layers"] = std::move(layers);
  m["attributes"] = cube.attributes();
  std::ofstream out(dir / "manifest.json", std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + (dir / "manifest.json").string());
  out << m.dump(2) << "\n";
}

FeatureCube read_cube(const fs::path& dir) {
  const fs::path path = dir / "manifest.json";
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  json m;
  try {
    m = json::parse(std::string(std::istreambuf_iterator<char>(in), {}));
  } catch (const json::parse_error& e) {
    throw DataError(path.string() + ": malformed manifest: " + e.what());
  }
  std::optional<FeatureCube> cube;
  for (const auto& [name, entry] : m.at("layers").items()) {
    Raster r = read_raster(dir / entry.at("file").get<std::string>());
    if (!cube) cube.emplace(r.grid());
    cube->add(name, std::move(r), parse_source(entry.at("source").get<std::string>()),
              entry.value("copied_from", std::string()));
  }
  if (!cube) throw DataError(path.string() + ": cube has no layers");
  if (m.contains("attributes"))
    for (const auto& [k, v] : m["attributes"].items()) cube->attributes()[k] = v.get<std::string>();
  return std::move(*cube);
}

}  // namespace landcover::features
