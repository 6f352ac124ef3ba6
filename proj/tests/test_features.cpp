#include <doctest.h>

#include <cmath>
#include <fstream>

#include "landcover/core/error.hpp"
#include "landcover/features/feature_cube.hpp"
#include "landcover/features/feature_matrix.hpp"
#include "support/synthetic.hpp"
#include "support/tempdir.hpp"

using namespace landcover;
using namespace landcover::features;
using landcover::testing::small_grid;

namespace {

FeatureCube ramp_cube(const GridSpec& g, const std::vector<std::string>& names, LayerSource src, double scale = 1.0) {
  FeatureCube cube(g);
  for (std::size_t k = 0; k < names.size(); ++k) {
    Raster r(g, 0.0);
    for (int row = 0; row < g.height; ++row)
      for (int col = 0; col < g.width; ++col) r.at(row, col) = scale * (100.0 * (k + 1) + 10.0 * row + col);
    cube.add(names[k], std::move(r), src);
  }
  return cube;
}

AuxLayerSet coarse_aux(const GridSpec& fine) {
  GridSpec coarse = fine;
  coarse.cell_size = fine.cell_size * 4;
  coarse.width = fine.width / 4 + 1;
  coarse.height = fine.height / 4 + 1;
  AuxLayerSet aux;
  double v = 1.0;
  for (const auto& name : AuxLayerSet::layer_names()) aux.get(name) = Raster(coarse, v++);
  return aux;
}

}  // namespace

TEST_CASE("feature cube rejects duplicates and grid mismatches") {
  GridSpec g = small_grid(4, 4);
  FeatureCube cube = ramp_cube(g, {"a", "b"}, LayerSource::optical);
  CHECK_THROWS_AS(cube.add("a", Raster(g, 1.0), LayerSource::optical), DataError);
  CHECK_THROWS_AS(cube.add("c", Raster(small_grid(3, 4), 1.0), LayerSource::optical), DataError);
  CHECK(cube.names() == std::vector<std::string>{"a", "b"});
}

TEST_CASE("assemble honours the fusion toggles") {
  GridSpec g = small_grid(8, 8);
  const FeatureCube opt = ramp_cube(g, {"ndvi_p25", "red_med"}, LayerSource::optical);
  const FeatureCube sar = ramp_cube(g, {"asc_vv_med", "asc_vh_med", "desc_vv_med"}, LayerSource::radar);
  const AuxLayerSet aux = coarse_aux(g);

  const FeatureCube s2 = assemble(&opt, &sar, &aux, Fusion::s2_only);
  CHECK(s2.size() == 2);
  CHECK_FALSE(s2.contains("asc_vv_med"));
  CHECK(assemble(&opt, &sar, nullptr, Fusion::s1_only).size() == 3);
  CHECK(assemble(&opt, &sar, nullptr, Fusion::s1s2).size() == 5);
  const FeatureCube full = assemble(&opt, &sar, &aux, Fusion::s1s2_aux);
  CHECK(full.size() == opt.size() + sar.size() + 6);
  CHECK(full.layer("elevation").source == LayerSource::aux);
  CHECK(full.layer("elevation").raster.grid() == g);
  CHECK(full.attributes().at("fusion") == "s1s2_aux");

  CHECK_THROWS_AS(assemble(nullptr, &sar, nullptr, Fusion::s1s2), DataError);
  CHECK_THROWS_AS(assemble(&opt, &sar, nullptr, Fusion::s1s2_aux), DataError);

  const FeatureCube clash = ramp_cube(g, {"red_med"}, LayerSource::radar);
  CHECK_THROWS_AS(assemble(&opt, &clash, nullptr, Fusion::s1s2), DataError);
  const FeatureCube other_grid = ramp_cube(small_grid(7, 8), {"x"}, LayerSource::radar);
  CHECK_THROWS_AS(assemble(&opt, &other_grid, nullptr, Fusion::s1s2), DataError);
}

TEST_CASE("assemble is associative and leaves values untouched") {
  GridSpec g = small_grid(5, 5);
  const FeatureCube a = ramp_cube(g, {"a1", "a2"}, LayerSource::optical);
  const FeatureCube b = ramp_cube(g, {"b1"}, LayerSource::radar, 2.0);
  const FeatureCube c = ramp_cube(g, {"c1", "c2"}, LayerSource::aux, 3.0);
  const FeatureCube left = merge(merge(a, b), c);
  const FeatureCube right = merge(a, merge(b, c));
  REQUIRE(left.names() == right.names());
  for (const auto& name : left.names()) CHECK(left.layer(name).raster == right.layer(name).raster);
  CHECK(left.layer("b1").raster == b.layer("b1").raster);
  CHECK(left.layer("c2").raster == c.layer("c2").raster);
}

TEST_CASE("sample_at: cell centres, nodata and outside points") {
  GridSpec g = small_grid(6, 4, 10.0);
  FeatureCube cube = ramp_cube(g, {"a", "b"}, LayerSource::optical);
  Raster holes = cube.layer("b").raster;
  holes.at(1, 1) = holes.nodata();
  FeatureCube with_hole(g);
  with_hole.add("a", cube.layer("a").raster, LayerSource::optical);
  with_hole.add("b", holes, LayerSource::optical);

  std::vector<SamplePoint> pts = {
      {g.center_x(2), g.center_y(3), 3, "centre"},
      {g.center_x(1), g.center_y(1), 4, "hole"},
      {g.origin_x - 5.0, g.origin_y, 1, "outside"},
      {g.center_x(5) + 4.9, g.center_y(0) - 4.9, 2, "edge"},
  };
  const SampleResult res = sample_at(with_hole, pts);
  REQUIRE(res.matrix.rows() == 2);
  CHECK(res.dropped_nodata == 1);
  CHECK(res.dropped_outside == 1);
  CHECK(res.matrix.id(0) == "centre");
  CHECK(res.matrix.at(0, 0) == cube.layer("a").raster.at(3, 2));
  CHECK(res.matrix.at(0, 1) == cube.layer("b").raster.at(3, 2));
  CHECK(res.matrix.label(0) == 3);
  CHECK(res.matrix.id(1) == "edge");
  CHECK(res.matrix.at(1, 0) == cube.layer("a").raster.at(0, 5));
}

TEST_CASE("sample_at over a ramp matches hand indexing") {
  GridSpec g = small_grid(8, 8, 10.0);
  const FeatureCube cube = ramp_cube(g, {"r"}, LayerSource::optical);
  // Points at (col, row) = (0, 0), (7, 3), (4, 6) with small offsets inside the cells.
  std::vector<SamplePoint> pts = {{g.origin_x + 1.0, g.origin_y - 1.0, std::nullopt, "p0"},
                                  {g.origin_x + 79.0, g.origin_y - 35.0, std::nullopt, "p1"},
                                  {g.origin_x + 42.0, g.origin_y - 68.0, std::nullopt, "p2"}};
  const SampleResult res = sample_at(cube, pts);
  REQUIRE(res.matrix.rows() == 3);
  CHECK_FALSE(res.matrix.has_labels());
  CHECK(res.matrix.at(0, 0) == 100.0);
  CHECK(res.matrix.at(1, 0) == 100.0 + 30.0 + 7.0);
  CHECK(res.matrix.at(2, 0) == 100.0 + 60.0 + 4.0);
}

TEST_CASE("sample_at preserves order and repeats") {
  Rng rng(4);
  GridSpec g = small_grid(10, 10, 10.0);
  const FeatureCube cube = ramp_cube(g, {"a", "b", "c"}, LayerSource::optical);
  std::vector<SamplePoint> pts;
  for (int i = 0; i < 50; ++i)
    pts.push_back({g.origin_x + 100.0 * uniform01(rng), g.origin_y - 100.0 * uniform01(rng), std::nullopt,
                   "q" + std::to_string(i)});
  pts.push_back(pts[7]);
  const SampleResult res = sample_at(cube, pts);
  REQUIRE(res.matrix.rows() == pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) CHECK(res.matrix.id(i) == pts[i].id);
  for (std::size_t j = 0; j < 3; ++j) CHECK(res.matrix.at(7, j) == res.matrix.at(50, j));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto cell = g.locate(pts[i].x, pts[i].y);
    REQUIRE(cell);
    CHECK(res.matrix.at(i, 1) == cube.layer("b").raster.at(cell->row, cell->col));
  }
}

TEST_CASE("feature matrix invariants") {
  FeatureMatrix m({"a", "b"});
  CHECK_THROWS_AS(FeatureMatrix({"a", "a"}), DataError);
  const double row[] = {1.0, 2.0};
  m.add_row(row, 3, "x");
  const double shorter[] = {1.0};
  CHECK_THROWS_AS(m.add_row(shorter, 3, "y"), DataError);
  const double bad[] = {1.0, std::nan("")};
  CHECK_THROWS_AS(m.add_row(bad, 3, "z"), DataError);
  CHECK_THROWS_AS(m.add_row(row, std::nullopt, "w"), DataError);
  m.add_row(row, 1, "v");
  CHECK(m.classes() == std::vector<int>{1, 3});
  CHECK(m.feature_index("b") == 1);
  const std::vector<std::string> keep = {"b"};
  FeatureMatrix sub = m.select_features(keep);
  CHECK(sub.cols() == 1);
  CHECK(sub.at(1, 0) == 2.0);
  CHECK(sub.labels() == m.labels());
}

TEST_CASE("feature matrix CSV round trip") {
  landcover::testing::TempDir dir("matrix");
  FeatureMatrix m = landcover::testing::gaussian_benchmark(50, 5, 3, 2.0, 1);
  write_matrix_csv(m, dir / "m.csv");
  const FeatureMatrix back = read_matrix_csv(dir / "m.csv");
  CHECK(back.feature_names() == m.feature_names());
  CHECK(back.labels() == m.labels());
  CHECK(back.ids() == m.ids());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) CHECK(back.at(i, j) == m.at(i, j));

  FeatureMatrix unlabeled({"a"});
  const double v[] = {0.5};
  unlabeled.add_row(v, std::nullopt, "u");
  write_matrix_csv(unlabeled, dir / "u.csv");
  CHECK_FALSE(read_matrix_csv(dir / "u.csv").has_labels());

  std::ofstream(dir / "bad.csv") << "a,label,id\nnot-a-number,1,r\n";
  CHECK_THROWS_AS(read_matrix_csv(dir / "bad.csv"), DataError);
}

TEST_CASE("feature cube directory round trip") {
  landcover::testing::TempDir dir("cube");
  GridSpec g = small_grid(4, 3);
  FeatureCube cube = ramp_cube(g, {"asc_vv_med"}, LayerSource::radar);
  cube.add("desc_vv_med", cube.layer("asc_vv_med").raster, LayerSource::radar, "asc_vv_med");
  cube.attributes()["speckle_filter"] = "on";
  write_cube(cube, dir / "cube");
  const FeatureCube back = read_cube(dir / "cube");
  CHECK(back.names() == cube.names());
  CHECK(back.layer("desc_vv_med").copied_from == "asc_vv_med");
  CHECK(back.layer("desc_vv_med").source == LayerSource::radar);
  CHECK(back.layer("asc_vv_med").raster == cube.layer("asc_vv_med").raster);
  CHECK(back.attributes() == cube.attributes());
}
