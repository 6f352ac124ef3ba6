#include <algorithm>
#include <cmath>

#include "landcover/core/error.hpp"
#include "landcover/core/parallel.hpp"
#include "landcover/raster/reducers.hpp"

namespace landcover {

Raster moving_window_std(const Raster& raster, int window) {
  if (window < 2) throw ArgumentError("moving window must span at least 2 cells");
  const int before = (window + 1) / 2 - 1;  // ceil(w/2) - 1
  const int after = window / 2;
  const int h = raster.height();
  const int w = raster.width();
  Raster out(raster.grid());

  parallel_for(static_cast<std::size_t>(h), [&](std::size_t row_index) {
    const int row = static_cast<int>(row_index);
    const int r0 = std::max(0, row - before);
    const int r1 = std::min(h - 1, row + after);
    std::vector<double> vals;
    vals.reserve(static_cast<std::size_t>(window) * static_cast<std::size_t>(window));
    for (int col = 0; col < w; ++col) {
      const int c0 = std::max(0, col - before);
      const int c1 = std::min(w - 1, col + after);
      vals.clear();
      for (int r = r0; r <= r1; ++r)
        for (int c = c0; c <= c1; ++c)
          if (raster.valid(r, c)) vals.push_back(raster.at(r, c));
      if (vals.size() < 2) continue;
      if (auto sd = kernel::moment(vals, Moment::std)) out.at(row, col) = *sd;
    }
  });
  return out;
}

Raster resample_to(const Raster& source, const GridSpec& target, Resampling method) {
  target.validate();
  const GridSpec& src = source.grid();
  if (src.crs_tag != target.crs_tag)
    throw DataError("resample: incompatible crs_tag '" + src.crs_tag + "' vs '" + target.crs_tag + "'");
  Raster out(target);

  parallel_for(static_cast<std::size_t>(target.height), [&](std::size_t row_index) {
    const int row = static_cast<int>(row_index);
    const double y = target.center_y(row);
    for (int col = 0; col < target.width; ++col) {
      const double x = target.center_x(col);
      const auto cell = src.locate(x, y);
      if (!cell) continue;
      if (method == Resampling::nearest) {
        if (source.valid(cell->row, cell->col)) out.at(row, col) = source.at(cell->row, cell->col);
        continue;
      }
      // Continuous pixel coordinates with integers at cell centres.
      const double fc = (x - src.origin_x) / src.cell_size - 0.5;
      const double fr = (src.origin_y - y) / src.cell_size - 0.5;
      const int c0 = static_cast<int>(std::floor(fc));
      const int r0 = static_cast<int>(std::floor(fr));
      const double tc = fc - c0;
      const double tr = fr - r0;
      double acc = 0, weight = 0;
      for (int dr = 0; dr <= 1; ++dr) {
        for (int dc = 0; dc <= 1; ++dc) {
          const int r = r0 + dr;
          const int c = c0 + dc;
          if (r < 0 || c < 0 || r >= src.height || c >= src.width || !source.valid(r, c)) continue;
          const double wgt = (dr ? tr : 1.0 - tr) * (dc ? tc : 1.0 - tc);
          if (wgt <= 0.0) continue;
          acc += wgt * source.at(r, c);
          weight += wgt;
        }
      }
      if (weight > 0.0) out.at(row, col) = acc / weight;
    }
  });
  return out;
}

}  // namespace landcover
