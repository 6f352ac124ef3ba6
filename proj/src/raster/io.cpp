#include "landcover/raster/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include <json.hpp>

#include "landcover/core/error.hpp"

namespace landcover {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::uint32_t to_little_endian(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    v = ((v & 0x000000ffu) << 24) | ((v & 0x0000ff00u) << 8) | ((v & 0x00ff0000u) >> 8) | ((v & 0xff000000u) >> 24);
  }
  return v;
}

std::string slurp(const fs::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw DataError("cannot read " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void dump_file(const fs::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("write failed: " + path.string());
}

template <typename T>
T required(const json& j, const char* key, const fs::path& path) {
  auto it = j.find(key);
  if (it == j.end()) throw DataError(path.string() + ": header missing '" + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw DataError(path.string() + ": header field '" + key + "' has the wrong type");
  }
}

}  // namespace

fs::path payload_path(const fs::path& header) {
  fs::path p = header;
  p.replace_extension(".bin");
  return p;
}

Tile read_tile(const fs::path& header) {
  json j;
  try {
    j = json::parse(slurp(header));
  } catch (const json::parse_error& e) {
    throw DataError(header.string() + ": malformed header: " + e.what());
  }
  if (!j.is_object()) throw DataError(header.string() + ": malformed header: not an object");

  GridSpec grid;
  grid.width = required<int>(j, "width", header);
  grid.height = required<int>(j, "height", header);
  grid.origin_x = required<double>(j, "origin_x", header);
  grid.origin_y = required<double>(j, "origin_y", header);
  grid.cell_size = required<double>(j, "cell_size", header);
  grid.crs_tag = required<std::string>(j, "crs_tag", header);
  double nodata = required<double>(j, "nodata", header);
  try {
    grid.validate();
  } catch (const DataError& e) {
    throw DataError(header.string() + ": malformed header: " + e.what());
  }

  std::string payload = slurp(payload_path(header), std::ios::binary);
  const std::size_t expected = grid.cell_count() * sizeof(float);
  if (payload.size() != expected)
    throw DataError(header.string() + ": dimension mismatch: header declares " + std::to_string(grid.cell_count()) +
                    " cells but payload holds " + std::to_string(payload.size() / sizeof(float)) + " values");

  std::vector<double> values(grid.cell_count());
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::uint32_t bits;
    std::memcpy(&bits, payload.data() + i * sizeof(float), sizeof(bits));
    values[i] = std::bit_cast<float>(to_little_endian(bits));
  }

  Tile tile{Raster(std::move(grid), std::move(values), nodata), std::nullopt, {}};
  if (auto it = j.find("timestamp"); it != j.end() && !it->is_null())
    tile.timestamp = Date::parse(it->get<std::string>());
  if (auto it = j.find("metadata"); it != j.end()) {
    if (!it->is_object()) throw DataError(header.string() + ": metadata must be an object");
    for (const auto& [k, v] : it->items()) tile.metadata.emplace(k, v.is_string() ? v.get<std::string>() : v.dump());
  }
  return tile;
}

void write_tile(const Tile& tile, const fs::path& header) {
  const Raster& r = tile.raster;
  r.grid().validate();
  json j = json::object();
  j["width"] = r.grid().width;
  j["height"] = r.grid().height;
  j["origin_x"] = r.grid().origin_x;
  j["origin_y"] = r.grid().origin_y;
  j["cell_size"] = r.grid().cell_size;
  j["crs_tag"] = r.grid().crs_tag;
  j["nodata"] = r.nodata();
  if (tile.timestamp) j["timestamp"] = tile.timestamp->to_string();
  json meta = json::object();
  for (const auto& [k, v] : tile.metadata) meta[k] = v;
  j["metadata"] = std::move(meta);

  std::string payload(r.size() * sizeof(float), '\0');
  for (std::size_t i = 0; i < r.size(); ++i) {
    std::uint32_t bits = to_little_endian(std::bit_cast<std::uint32_t>(static_cast<float>(r[i])));
    std::memcpy(payload.data() + i * sizeof(float), &bits, sizeof(bits));
  }
  if (header.has_parent_path()) fs::create_directories(header.parent_path());
  dump_file(header, j.dump(2) + "\n");
  dump_file(payload_path(header), payload);
}

Raster read_raster(const fs::path& header) { return read_tile(header).raster; }

void write_raster(const Raster& raster, const fs::path& header) { write_tile(Tile{raster, std::nullopt, {}}, header); }

SceneStack read_stack(const fs::path& dir) {
  const fs::path manifest_path = dir / "manifest.json";
  json m;
  try {
    m = json::parse(slurp(manifest_path));
  } catch (const json::parse_error& e) {
    throw DataError(manifest_path.string() + ": malformed manifest: " + e.what());
  }
  SceneStack stack;
  stack.sensor = parse_sensor(required<std::string>(m, "sensor", manifest_path));
  if (!m.contains("scenes") || !m["scenes"].is_array()) throw DataError(manifest_path.string() + ": missing scenes[]");

  for (const auto& s : m["scenes"]) {
    Date ts = Date::parse(required<std::string>(s, "timestamp", manifest_path));
    std::optional<TimedScene> scene;
    for (const auto& [name, file] : s.at("bands").items()) {
      Raster band = read_raster(dir / file.get<std::string>());
      if (!scene) scene = TimedScene::make(band.grid(), ts);
      scene->set_band(name, std::move(band));
    }
    if (!scene) throw DataError(manifest_path.string() + ": scene without bands");
    if (auto it = s.find("mask"); it != s.end() && !it->is_null()) {
      Raster mask = read_raster(dir / it->get<std::string>());
      if (!(mask.grid() == scene->grid)) throw DataError(manifest_path.string() + ": mask grid differs from bands");
      for (std::size_t i = 0; i < mask.size(); ++i) scene->valid_mask[i] = (mask.valid(i) && mask[i] != 0.0) ? 1 : 0;
    }
    if (auto it = s.find("metadata"); it != s.end())
      for (const auto& [k, v] : it->items()) scene->metadata.emplace(k, v.is_string() ? v.get<std::string>() : v.dump());
    stack.scenes.push_back(std::move(*scene));
  }
  stack.sort_by_time();
  stack.validate();
  return stack;
}

void write_stack(const SceneStack& stack, const fs::path& dir) {
  stack.validate();
  fs::create_directories(dir);
  json m = json::object();
  m["sensor"] = std::string(sensor_name(stack.sensor));
  std::map<std::string, int> band_names;
  json scenes = json::array();
  for (std::size_t i = 0; i < stack.scenes.size(); ++i) {
    const TimedScene& sc = stack.scenes[i];
    char id[32];
    std::snprintf(id, sizeof(id), "s%04zu", i);
    json s = json::object();
    s["id"] = id;
    s["timestamp"] = sc.timestamp.to_string();
    json meta = json::object();
    for (const auto& [k, v] : sc.metadata) meta[k] = v;
    s["metadata"] = meta;
    json bands = json::object();
    for (const auto& [name, r] : sc.bands) {
      std::string file = std::string(id) + "_" + name + ".json";
      write_raster(r, dir / file);
      bands[name] = file;
      band_names[name];
    }
    s["bands"] = bands;
    Raster mask(sc.grid, 1.0);
    for (std::size_t c = 0; c < mask.size(); ++c) mask[c] = sc.valid_mask[c] ? 1.0 : 0.0;
    std::string mask_file = std::string(id) + "_mask.json";
    write_raster(mask, dir / mask_file);
    s["mask"] = mask_file;
    scenes.push_back(std::move(s));
  }
  json names = json::array();
  for (const auto& [n, _] : band_names) names.push_back(n);
  m["bands"] = names;
  m["scenes"] = scenes;
  dump_file(dir / "manifest.json", m.dump(2) + "\n");
}

}  // namespace landcover
