#include "landcover/raster/reducers.hpp"

#include <algorithm>
#include <cmath>

#include "landcover/core/error.hpp"
#include "landcover/core/parallel.hpp"

namespace landcover {

std::string_view moment_name(Moment stat) {
  switch (stat) {
    case Moment::mean: return "mean";
    case Moment::median: return "median";
    case Moment::std: return "std";
    case Moment::skewness: return "skewness";
    case Moment::kurtosis: return "kurtosis";
  }
  return "";
}

Moment parse_moment(std::string_view name) {
  for (Moment m : {Moment::mean, Moment::median, Moment::std, Moment::skewness, Moment::kurtosis})
    if (moment_name(m) == name) return m;
  throw ArgumentError("unknown statistic '" + std::string(name) + "'");
}

namespace kernel {

double percentile_sorted(std::span<const double> sorted, double p) {
  const std::size_t n = sorted.size();
  const double h = static_cast<double>(n - 1) * p;  // zero-based rank
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= n) return sorted[n - 1];
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

std::optional<double> moment(std::span<double> obs, Moment stat) {
  const std::size_t n = obs.size();
  if (n == 0) return std::nullopt;
  if (stat == Moment::median) {
    std::sort(obs.begin(), obs.end());
    return percentile_sorted(obs, 0.5);
  }
  // Shift by the first observation so constant series give exact zeros.
  const double shift = obs[0];
  double sum = 0;
  for (double v : obs) sum += v - shift;
  const double mean_shifted = sum / static_cast<double>(n);
  if (stat == Moment::mean) return shift + mean_shifted;
  if (stat == Moment::std && n < 2) return std::nullopt;
  if ((stat == Moment::skewness || stat == Moment::kurtosis) && n < 4) return std::nullopt;

  double m2 = 0, m3 = 0, m4 = 0;
  for (double v : obs) {
    const double d = (v - shift) - mean_shifted;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  m2 *= inv_n;
  m3 *= inv_n;
  m4 *= inv_n;
  switch (stat) {
    case Moment::std: return std::sqrt(m2);
    case Moment::skewness:
      if (m2 == 0.0) return std::nullopt;
      return m3 / std::pow(m2, 1.5);
    case Moment::kurtosis:
      if (m2 == 0.0) return std::nullopt;
      return m4 / (m2 * m2) - 3.0;
    default: return std::nullopt;
  }
}

}  // namespace kernel

namespace {

void require_band(const SceneStack& stack, std::string_view band) {
  for (const auto& s : stack.scenes)
    if (s.has_band(band)) return;
  throw DataError("unknown band '" + std::string(band) + "' in stack");
}

const Raster* find_band(const TimedScene& scene, std::string_view band) {
  auto it = scene.bands.find(band);
  return it == scene.bands.end() ? nullptr : &it->second;
}

// Applies `reduce(observations, cell)` per cell, row-parallel.
template <typename Reduce>
void reduce_rows(const SceneStack& stack, std::string_view band, Reduce&& reduce) {
  const GridSpec& grid = stack.grid();
  std::vector<const Raster*> bands;
  bands.reserve(stack.size());
  for (const auto& s : stack.scenes) bands.push_back(find_band(s, band));

  parallel_for(static_cast<std::size_t>(grid.height), [&](std::size_t row) {
    std::vector<double> obs;
    obs.reserve(stack.size());
    const std::size_t begin = row * static_cast<std::size_t>(grid.width);
    for (std::size_t i = begin; i < begin + static_cast<std::size_t>(grid.width); ++i) {
      obs.clear();
      for (std::size_t s = 0; s < stack.size(); ++s)
        if (bands[s] && stack.scenes[s].observed(*bands[s], i)) obs.push_back((*bands[s])[i]);
      reduce(obs, i);
    }
  });
}

void check_fraction(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("percentile fraction must lie in [0, 1]");
}

}  // namespace

void gather_observations(const SceneStack& stack, std::string_view band, std::size_t cell, std::vector<double>& out) {
  out.clear();
  for (const auto& s : stack.scenes)
    if (const Raster* r = find_band(s, band); r && s.observed(*r, cell)) out.push_back((*r)[cell]);
}

std::vector<Raster> percentile_reduce(const SceneStack& stack, std::string_view band, std::span<const double> ps) {
  for (double p : ps) check_fraction(p);
  require_band(stack, band);
  std::vector<Raster> out(ps.size(), Raster(stack.grid()));
  reduce_rows(stack, band, [&](std::vector<double>& obs, std::size_t i) {
    if (obs.empty()) return;
    std::sort(obs.begin(), obs.end());
    for (std::size_t k = 0; k < ps.size(); ++k) out[k][i] = kernel::percentile_sorted(obs, ps[k]);
  });
  return out;
}

Raster percentile_reduce(const SceneStack& stack, std::string_view band, double p) {
  const double ps[] = {p};
  return std::move(percentile_reduce(stack, band, ps).front());
}

Raster moment_reduce(const SceneStack& stack, std::string_view band, Moment stat) {
  require_band(stack, band);
  Raster out(stack.grid());
  reduce_rows(stack, band, [&](std::vector<double>& obs, std::size_t i) {
    if (auto v = kernel::moment(obs, stat)) out[i] = *v;
  });
  return out;
}

}  // namespace landcover
