#include <doctest.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "landcover/core/error.hpp"
#include "landcover/raster/io.hpp"
#include "landcover/raster/reducers.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"
#include "support/tempdir.hpp"

using namespace landcover;
using landcover::testing::small_grid;

namespace {

SceneStack series_stack(const std::vector<double>& series, const std::string& band = "red") {
  GridSpec g = small_grid(1, 1);
  SceneStack stack;
  for (std::size_t i = 0; i < series.size(); ++i) {
    TimedScene s = TimedScene::make(g, Date{2019, static_cast<unsigned>(i % 12 + 1), 1});
    s.set_band(band, Raster(g, std::vector<double>{series[i]}));
    stack.scenes.push_back(std::move(s));
  }
  return stack;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Raster random_raster(Rng& rng, const GridSpec& g, double missing = 0.0) {
  Raster r(g, 0.0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    // Values representable in binary32 so the payload round-trips exactly.
    r[i] = static_cast<float>(100.0 * landcover::testing::normal(rng));
    if (uniform01(rng) < missing) r[i] = r.nodata();
  }
  return r;
}

}  // namespace

TEST_CASE("grid validation and location") {
  GridSpec g = small_grid(4, 3, 10.0);
  CHECK_NOTHROW(g.validate());
  auto c = g.locate(g.origin_x + 15.0, g.origin_y - 25.0);
  REQUIRE(c);
  CHECK(c->row == 2);
  CHECK(c->col == 1);
  CHECK_FALSE(g.locate(g.origin_x - 1.0, g.origin_y - 1.0));
  CHECK_FALSE(g.locate(g.origin_x + 1.0, g.origin_y - 31.0));
  CHECK(g.center_x(0) == doctest::Approx(g.origin_x + 5.0));
  CHECK(g.center_y(0) == doctest::Approx(g.origin_y - 5.0));
  GridSpec bad = g;
  bad.width = 0;
  CHECK_THROWS_AS(bad.validate(), DataError);
  bad = g;
  bad.cell_size = -1;
  CHECK_THROWS_AS(bad.validate(), DataError);
}

TEST_CASE("raster construction checks dimensions") {
  GridSpec g = small_grid(2, 2);
  CHECK_THROWS_AS(Raster(g, std::vector<double>{1, 2, 3}), DataError);
  Raster r(g, std::vector<double>{1, 2, 3, 4});
  CHECK(r.at(1, 0) == 3);
  Raster nd(g);
  CHECK_FALSE(nd.valid(0));
  r[1] = std::nan("");
  CHECK_FALSE(r.valid(1));
}

TEST_CASE("dates parse and order") {
  CHECK(Date::parse("2018-03-04") == Date{2018, 3, 4});
  CHECK(Date::parse("2018-03-04T10:11:12Z") == Date{2018, 3, 4});
  CHECK(Date::parse("2018-03-04").to_string() == "2018-03-04");
  CHECK(Date{2018, 1, 31} < Date{2018, 2, 1});
  CHECK_THROWS_AS(Date::parse("2018-13-01"), DataError);
  CHECK_THROWS_AS(Date::parse("garbage"), DataError);
}

TEST_CASE("tile round trip: 2x2 values") {
  landcover::testing::TempDir dir("tile22");
  Raster r(small_grid(2, 2), std::vector<double>{1, 2, 3, 4});
  write_raster(r, dir / "t.json");
  Raster back = read_raster(dir / "t.json");
  CHECK(back == r);
  CHECK(std::filesystem::file_size(dir / "t.bin") == 16);
}

TEST_CASE("tile payload of a 1x1 raster holds exactly 7.5") {
  landcover::testing::TempDir dir("tile11");
  write_raster(Raster(small_grid(1, 1), std::vector<double>{7.5}), dir / "one.json");
  const std::string bytes = slurp(dir / "one.bin");
  REQUIRE(bytes.size() == 4);
  float v;
  std::memcpy(&v, bytes.data(), 4);
  CHECK(v == 7.5f);
}

TEST_CASE("all-nodata raster writes the sentinel everywhere") {
  landcover::testing::TempDir dir("tilend");
  Raster r(small_grid(3, 2));
  write_raster(r, dir / "nd.json");
  const std::string bytes = slurp(dir / "nd.bin");
  REQUIRE(bytes.size() == 24);
  for (int i = 0; i < 6; ++i) {
    float v;
    std::memcpy(&v, bytes.data() + 4 * i, 4);
    CHECK(v == -9999.0f);
  }
}

TEST_CASE("payload size mismatch is reported") {
  landcover::testing::TempDir dir("tilebad");
  write_raster(Raster(small_grid(2, 2), 1.0), dir / "t.json");
  {
    std::ofstream out(dir / "t.bin", std::ios::binary | std::ios::trunc);
    const float five[5] = {1, 2, 3, 4, 5};
    out.write(reinterpret_cast<const char*>(five), sizeof(five));
  }
  try {
    read_raster(dir / "t.json");
    FAIL("expected a dimension mismatch");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("dimension mismatch") != std::string::npos);
  }
  std::ofstream(dir / "h.json") << "{\"width\": 2";
  CHECK_THROWS_AS(read_raster(dir / "h.json"), DataError);
  CHECK_THROWS_AS(read_raster(dir / "absent.json"), DataError);
}

TEST_CASE("random 64x64 tiles round-trip bit-exact and byte-identical") {
  landcover::testing::TempDir dir("tile64");
  Rng rng(64);
  for (int trial = 0; trial < 5; ++trial) {
    Raster r = random_raster(rng, small_grid(64, 64), 0.05);
    write_raster(r, dir / "a.json");
    Raster back = read_raster(dir / "a.json");
    CHECK(back == r);
    write_raster(back, dir / "b.json");
    CHECK(slurp(dir / "a.bin") == slurp(dir / "b.bin"));
    Tile ta = read_tile(dir / "a.json");
    CHECK(ta.raster == r);
  }
}

TEST_CASE("tile header rewrite is byte-identical") {
  landcover::testing::TempDir dir("tilehdr");
  Tile t{Raster(small_grid(3, 3), 2.0), Date{2018, 6, 1}, {{"orbit_mode", "ASC"}}};
  write_tile(t, dir / "a.json");
  write_tile(read_tile(dir / "a.json"), dir / "b.json");
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
  Tile back = read_tile(dir / "b.json");
  CHECK(back.timestamp == t.timestamp);
  CHECK(back.metadata.at("orbit_mode") == "ASC");
}

TEST_CASE("stack directory round trip") {
  landcover::testing::TempDir dir("stack");
  Rng rng(5);
  SceneStack stack = landcover::testing::random_stack(rng, 4, "red", small_grid(5, 4));
  stack.scenes[1].metadata["cloudy_pixel_fraction"] = "0.25";
  write_stack(stack, dir.path());
  SceneStack back = read_stack(dir.path());
  REQUIRE(back.size() == stack.size());
  for (std::size_t s = 0; s < stack.size(); ++s) {
    CHECK(back.scenes[s].timestamp == stack.scenes[s].timestamp);
    CHECK(back.scenes[s].valid_mask == stack.scenes[s].valid_mask);
    CHECK(back.scenes[s].band("red") == stack.scenes[s].band("red"));
    CHECK(back.scenes[s].metadata == stack.scenes[s].metadata);
  }
}

TEST_CASE("percentile examples") {
  SceneStack st = series_stack({10, 20, 30, 40, 50});
  CHECK(percentile_reduce(st, "red", 0.5)[0] == 30.0);
  CHECK(percentile_reduce(st, "red", 0.95)[0] == doctest::Approx(48.0).epsilon(1e-12));
  CHECK(percentile_reduce(st, "red", 0.0)[0] == 10.0);
  CHECK(percentile_reduce(st, "red", 1.0)[0] == 50.0);
  CHECK_THROWS_AS(percentile_reduce(st, "red", 1.5), ArgumentError);
  CHECK_THROWS_AS(percentile_reduce(st, "nir", 0.5), DataError);

  for (auto& s : st.scenes) s.valid_mask[0] = 0;
  CHECK_FALSE(percentile_reduce(st, "red", 0.5).valid(0));
}

TEST_CASE("moment examples") {
  SceneStack constant = series_stack({5, 5, 5, 5});
  CHECK(moment_reduce(constant, "red", Moment::std)[0] == 0.0);
  CHECK_FALSE(moment_reduce(constant, "red", Moment::skewness).valid(0));
  CHECK_FALSE(moment_reduce(constant, "red", Moment::kurtosis).valid(0));

  SceneStack sym = series_stack({1, 2, 3, 4, 5});
  CHECK(std::abs(moment_reduce(sym, "red", Moment::skewness)[0]) < 1e-12);

  SceneStack st = series_stack({1, 1, 1, 9});
  const std::vector<double> xs = {1, 1, 1, 9};
  // Hand values: mean 3, m2 = 12, m3 = 48, m4 = 336.
  CHECK(moment_reduce(st, "red", Moment::std)[0] == doctest::Approx(std::sqrt(12.0)).epsilon(1e-12));
  CHECK(std::abs(moment_reduce(st, "red", Moment::std)[0] - *landcover::testing::oracle_std(xs)) <= 1e-9);
  CHECK(std::abs(moment_reduce(st, "red", Moment::skewness)[0] - *landcover::testing::oracle_skewness(xs)) <= 1e-9);
  CHECK(std::abs(moment_reduce(st, "red", Moment::kurtosis)[0] - *landcover::testing::oracle_kurtosis(xs)) <= 1e-9);
  CHECK(moment_reduce(st, "red", Moment::skewness)[0] == doctest::Approx(48.0 / std::pow(12.0, 1.5)));
  CHECK(moment_reduce(st, "red", Moment::kurtosis)[0] == doctest::Approx(336.0 / 144.0 - 3.0));
  CHECK(moment_reduce(st, "red", Moment::mean)[0] == 3.0);
  CHECK(moment_reduce(st, "red", Moment::median)[0] == 1.0);

  CHECK_FALSE(moment_reduce(series_stack({4}), "red", Moment::std).valid(0));
  CHECK_FALSE(moment_reduce(series_stack({1, 2, 3}), "red", Moment::skewness).valid(0));
  CHECK(parse_moment("kurtosis") == Moment::kurtosis);
  CHECK_THROWS(parse_moment("variance"));
}

TEST_CASE("reducers match brute-force oracles on random stacks") {
  Rng rng(2024);
  const GridSpec g = small_grid(8, 8);
  const std::vector<double> ps = {0.05, 0.25, 0.5, 0.75, 0.95};
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const SceneStack st = landcover::testing::random_stack(rng, 1 + uniform_below(rng, 12), "b", g);
    const auto pct = percentile_reduce(st, "b", ps);
    const Raster sd = moment_reduce(st, "b", Moment::std);
    const Raster sk = moment_reduce(st, "b", Moment::skewness);
    const Raster ku = moment_reduce(st, "b", Moment::kurtosis);
    const Raster md = moment_reduce(st, "b", Moment::median);
    for (std::size_t i = 0; i < g.cell_count(); ++i) {
      const auto xs = landcover::testing::observations(st, "b", i);
      for (std::size_t k = 0; k < ps.size(); ++k) {
        REQUIRE(pct[k].valid(i) == !xs.empty());
        if (!xs.empty()) worst = std::max(worst, std::abs(pct[k][i] - landcover::testing::oracle_percentile(xs, ps[k])));
      }
      if (!xs.empty()) CHECK(md[i] == pct[2][i]);
      for (auto [r, o] : {std::pair{&sd, landcover::testing::oracle_std(xs)},
                          std::pair{&sk, landcover::testing::oracle_skewness(xs)},
                          std::pair{&ku, landcover::testing::oracle_kurtosis(xs)}}) {
        REQUIRE(r->valid(i) == o.has_value());
        if (o) worst = std::max(worst, std::abs((*r)[i] - *o));
      }
    }
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("reducers ignore scene order") {
  Rng rng(11);
  SceneStack st = landcover::testing::random_stack(rng, 9, "b", small_grid(6, 6));
  SceneStack shuffled = st;
  shuffle(std::span<TimedScene>(shuffled.scenes), rng);
  CHECK(percentile_reduce(st, "b", 0.25) == percentile_reduce(shuffled, "b", 0.25));
  for (Moment m : {Moment::mean, Moment::median, Moment::std, Moment::skewness, Moment::kurtosis}) {
    const Raster a = moment_reduce(st, "b", m), b = moment_reduce(shuffled, "b", m);
    for (std::size_t i = 0; i < a.size(); ++i) {
      REQUIRE(a.valid(i) == b.valid(i));
      if (a.valid(i)) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("masking an observation equals deleting it") {
  Rng rng(12);
  SceneStack st = landcover::testing::random_stack(rng, 6, "b", small_grid(1, 1));
  for (auto& s : st.scenes) {
    s.valid_mask[0] = 1;
    Raster r = s.band("b");
    if (!r.valid(0)) r[0] = 1.0;
    s.set_band("b", r);
  }
  SceneStack masked = st;
  masked.scenes[2].valid_mask[0] = 0;
  SceneStack removed = st;
  removed.scenes.erase(removed.scenes.begin() + 2);
  CHECK(percentile_reduce(masked, "b", 0.3)[0] == percentile_reduce(removed, "b", 0.3)[0]);
  CHECK(moment_reduce(masked, "b", Moment::kurtosis)[0] == moment_reduce(removed, "b", Moment::kurtosis)[0]);
}

TEST_CASE("moving-window std examples") {
  Raster constant(small_grid(7, 5), 3.25);
  Raster out = moving_window_std(constant, 6);
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == 0.0);
  CHECK_FALSE(moving_window_std(Raster(small_grid(1, 1), 1.0), 6).valid(0));
  CHECK_THROWS_AS(moving_window_std(constant, 1), ArgumentError);
}

TEST_CASE("moving-window std matches the naive oracle") {
  Rng rng(10);
  double worst = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const int w = 2 + static_cast<int>(uniform_below(rng, 6));
    Raster r = random_raster(rng, small_grid(10, 10), 0.1);
    const Raster got = moving_window_std(r, w);
    const Raster want = landcover::testing::oracle_window_std(r, w);
    for (std::size_t i = 0; i < r.size(); ++i) {
      REQUIRE(got.valid(i) == want.valid(i));
      if (got.valid(i)) worst = std::max(worst, std::abs(got[i] - want[i]));
    }
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("even window anchoring puts the cell upper-left of the centre") {
  // A single spike at (2,2) is seen by cells whose 6x6 window covers it:
  // rows/cols r-2..r+3, so cells 0..4 in each axis (clipped at 0).
  Raster r(small_grid(8, 8), 0.0);
  r.at(2, 2) = 1.0;
  const Raster out = moving_window_std(r, 6);
  for (int row = 0; row < 8; ++row)
    for (int col = 0; col < 8; ++col) {
      const bool sees = row >= 0 && row <= 4 && col >= 0 && col <= 4;
      CHECK((out.at(row, col) > 0) == sees);
    }
}

TEST_CASE("resampling") {
  Rng rng(3);
  Raster src = random_raster(rng, small_grid(6, 5), 0.0);
  CHECK(resample_to(src, src.grid(), Resampling::nearest) == src);

  Raster constant(small_grid(4, 4, 100.0), 12.5);
  GridSpec fine = small_grid(13, 11, 30.0);
  Raster up = resample_to(constant, fine, Resampling::bilinear);
  for (std::size_t i = 0; i < up.size(); ++i)
    if (up.valid(i)) CHECK(up[i] == doctest::Approx(12.5));

  // Linear ramp v = 2x - 3y evaluated at cell centres, upsampled 2x.
  GridSpec coarse = small_grid(8, 8, 20.0);
  Raster ramp(coarse, 0.0);
  for (int row = 0; row < 8; ++row)
    for (int col = 0; col < 8; ++col)
      ramp.at(row, col) = 2.0 * (coarse.center_x(col) - coarse.origin_x) - 3.0 * (coarse.center_y(row) - coarse.origin_y);
  GridSpec twice = small_grid(16, 16, 10.0);
  Raster fine_ramp = resample_to(ramp, twice, Resampling::bilinear);
  for (int row = 0; row < 16; ++row)
    for (int col = 0; col < 16; ++col) {
      const double x = twice.center_x(col), y = twice.center_y(row);
      const bool interior = x >= coarse.center_x(0) && x <= coarse.center_x(7) && y <= coarse.center_y(0) &&
                            y >= coarse.center_y(7);
      if (!interior) continue;
      CHECK(std::abs(fine_ramp.at(row, col) - (2.0 * (x - coarse.origin_x) - 3.0 * (y - coarse.origin_y))) <= 1e-6);
    }

  GridSpec outside = small_grid(2, 2, 10.0);
  outside.origin_x -= 1e6;
  Raster off = resample_to(src, outside, Resampling::nearest);
  CHECK_FALSE(off.valid(0));

  GridSpec other = src.grid();
  other.crs_tag = "EPSG:4326";
  CHECK_THROWS_AS(resample_to(src, other, Resampling::nearest), DataError);
}

TEST_CASE("bilinear renormalises around nodata") {
  Raster src(small_grid(2, 2, 10.0), std::vector<double>{1.0, kDefaultNodata, 3.0, 5.0});
  GridSpec one = small_grid(1, 1, 20.0);
  Raster out = resample_to(src, one, Resampling::bilinear);
  CHECK(out[0] == doctest::Approx(3.0));
}
