#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "landcover/core/error.hpp"
#include "landcover/rf/selection.hpp"
#include "support/synthetic.hpp"

using namespace landcover;
using namespace landcover::rf;
using landcover::testing::gaussian_benchmark;

TEST_CASE("rfe with the target already met is the identity") {
  const FeatureMatrix m = gaussian_benchmark(200, 15, 5, 2.0, 1, 3);
  const RfeResult r = rfe(m, 15, 0.2, {20, 0, 1});
  CHECK(r.selected == m.feature_names());
  CHECK(r.trace.empty());
}

TEST_CASE("rfe step sizes follow the ceiling rule") {
  const FeatureMatrix m = gaussian_benchmark(200, 20, 5, 2.0, 2, 3);
  const RfeResult r = rfe(m, 15, 0.2, {20, 0, 1});
  REQUIRE(r.trace.size() == 2);
  CHECK(r.trace[0].feature_count == 20);
  CHECK(r.trace[1].feature_count == 16);
  CHECK(r.selected.size() == 15);

  // Oracle for the size sequence: n -> max(target, n - ceil(f n)).
  const FeatureMatrix wide = gaussian_benchmark(150, 40, 5, 2.0, 3, 3);
  const RfeResult w = rfe(wide, 7, 0.3, {10, 0, 1});
  std::size_t n = 40;
  for (const auto& step : w.trace) {
    CHECK(step.feature_count == n);
    CHECK(step.features.size() == n);
    n = std::max<std::size_t>(7, n - static_cast<std::size_t>(std::ceil(0.3 * static_cast<double>(n))));
  }
  CHECK(n == 7);
  CHECK(w.selected.size() == 7);
}

TEST_CASE("rfe keeps informative features") {
  // Ten informative columns then ten noise columns; keep ten.
  const FeatureMatrix m = gaussian_benchmark(800, 20, 10, 2.0, 4, 8);
  const RfeResult r = rfe(m, 10, 0.2, {100, 0, 3});
  std::vector<std::string> expected(m.feature_names().begin(), m.feature_names().begin() + 10);
  CHECK(r.selected == expected);
  CHECK(rfe(m, 10, 0.2, {100, 0, 3}).selected == r.selected);
}

TEST_CASE("rfe argument errors") {
  const FeatureMatrix m = gaussian_benchmark(60, 5, 2, 2.0, 5, 2);
  CHECK_THROWS_AS(rfe(m, 0), ArgumentError);
  CHECK_THROWS_AS(rfe(m, 6), ArgumentError);
  CHECK_THROWS_AS(rfe(m, 3, 0.0), ArgumentError);
}

TEST_CASE("default tuning grids") {
  const auto nt = default_ntree_grid();
  REQUIRE(nt.size() == 19);
  CHECK(nt.front() == 50);
  CHECK(nt.back() == 500);
  CHECK(nt[1] == 75);
  CHECK(default_mtry_grid() == std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
}

TEST_CASE("tune over a single point returns it") {
  const FeatureMatrix m = gaussian_benchmark(200, 6, 3, 1.0, 6, 3);
  const TuneResult r = tune(m, {40}, {2}, 9);
  CHECK(r.best_ntree == 40);
  CHECK(r.best_mtry == 2);
  REQUIRE(r.surface.size() == 1);
  CHECK(r.best_error == doctest::Approx(1.0 - oob_evaluate(train(m, {40, 2, 9}), m).accuracy));
}

TEST_CASE("tune surface cells equal independently trained forests") {
  const FeatureMatrix m = gaussian_benchmark(200, 6, 3, 0.8, 7, 3);
  const TuneResult r = tune(m, {10, 30, 20}, {1, 3}, 5);
  REQUIRE(r.surface.size() == 6);
  for (const auto& cell : r.surface) {
    const double err = 1.0 - oob_evaluate(train(m, {cell.ntree, cell.mtry, 5}), m).accuracy;
    CHECK(cell.oob_error == err);
  }
  // The best cell is a grid member with minimal error, ties to smaller ntree then mtry.
  const auto best = std::min_element(r.surface.begin(), r.surface.end(), [](const TuneCell& a, const TuneCell& b) {
    if (a.oob_error != b.oob_error) return a.oob_error < b.oob_error;
    return a.ntree != b.ntree ? a.ntree < b.ntree : a.mtry < b.mtry;
  });
  CHECK(r.best_ntree == best->ntree);
  CHECK(r.best_mtry == best->mtry);
  CHECK(r.best_error == best->oob_error);
}

TEST_CASE("tune ties resolve to the smallest ntree, then mtry") {
  // Perfectly separable in every column: every cell has zero error.
  FeatureMatrix m(landcover::testing::numbered("s", 3));
  Rng rng(1);
  for (std::size_t i = 0; i < 120; ++i) {
    const int k = static_cast<int>(i % 3);
    const double row[] = {5.0 * k + uniform01(rng), 5.0 * k + uniform01(rng), 5.0 * k + uniform01(rng)};
    m.add_row(row, k + 1, landcover::testing::sample_id(i));
  }
  const TuneResult r = tune(m, {60, 20, 40}, {3, 2}, 2);
  for (const auto& cell : r.surface) CHECK(cell.oob_error == 0.0);
  CHECK(r.best_ntree == 20);
  CHECK(r.best_mtry == 2);
}

TEST_CASE("tune is deterministic and errors on bad grids") {
  const FeatureMatrix m = gaussian_benchmark(150, 5, 3, 1.0, 8, 3);
  const TuneResult a = tune(m, {10, 20}, {1, 2}, 4);
  const TuneResult b = tune(m, {10, 20}, {1, 2}, 4);
  REQUIRE(a.surface.size() == b.surface.size());
  for (std::size_t i = 0; i < a.surface.size(); ++i) CHECK(a.surface[i].oob_error == b.surface[i].oob_error);
  CHECK_THROWS_AS(tune(m, {}, {1}, 1), ArgumentError);
  CHECK_THROWS_AS(tune(m, {10}, {}, 1), ArgumentError);
  CHECK_THROWS_AS(tune(m, {10}, {6}, 1), ArgumentError);
}

TEST_CASE("tune errors on separable data stay within 5 pp across the grid") {
  const FeatureMatrix m = gaussian_benchmark(600, 10, 10, 3.0, 9, 4);
  const TuneResult r = tune(m, {50, 100, 150}, {1, 2, 3, 5, 8}, 6);
  double lo = 1, hi = 0;
  for (const auto& c : r.surface) {
    lo = std::min(lo, c.oob_error);
    hi = std::max(hi, c.oob_error);
  }
  MESSAGE("error range " << lo << " .. " << hi);
  CHECK(hi - lo <= 0.05);
}
