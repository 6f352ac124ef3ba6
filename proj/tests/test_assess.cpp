#include <doctest.h>

#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "landcover/assess/area_stats.hpp"
#include "landcover/assess/confusion.hpp"
#include "landcover/assess/experiments.hpp"
#include "landcover/assess/grid_accuracy.hpp"
#include "landcover/assess/reclass.hpp"
#include "landcover/core/error.hpp"
#include "support/synthetic.hpp"
#include "support/tempdir.hpp"

using namespace landcover;
using namespace landcover::assess;
using reference::ClassCatalog;
namespace id = reference::class_id;

namespace {

const std::filesystem::path kReferenceMatrix = std::filesystem::path(LANDCOVER_TEST_DATA) / "reference_confusion.csv";

double se_oracle(double hits, double n) {
  const double p = hits / n;
  return std::sqrt(p * (1 - p) / n) * 100.0;
}

}  // namespace

TEST_CASE("confusion examples") {
  std::vector<int> pred, ref;
  for (int i = 0; i < 10; ++i) {
    pred.push_back(1 + i % 8);
    ref.push_back(1 + i % 8);
  }
  const auto cm = confusion(pred, ref);
  CHECK(cm.total() == 10);
  CHECK(cm.diagonal() == 10);
  const auto rep = accuracy_report(cm);
  CHECK(*rep.overall.percent == 100.0);
  CHECK(*rep.overall.se == 0.0);

  const std::vector<int> all_one(10, 1);
  const std::vector<int> half = {1, 1, 1, 1, 1, 2, 2, 2, 2, 2};
  const auto r2 = accuracy_report(confusion(all_one, half));
  CHECK(*r2.classes[0].users.percent == doctest::Approx(50.0));
  CHECK(*r2.classes[0].producers.percent == doctest::Approx(100.0));
  CHECK_FALSE(r2.classes[1].users.percent);  // nothing predicted as class 2
  CHECK(*r2.classes[1].producers.percent == 0.0);
  CHECK(r2.classes[1].users.n == 0);

  CHECK_THROWS_AS(confusion(std::vector<int>{1, 2}, std::vector<int>{1}), DataError);
  CHECK_THROWS_AS(confusion(std::vector<int>{}, std::vector<int>{}), DataError);
  CHECK_THROWS_AS(confusion(std::vector<int>{9}, std::vector<int>{1}), DataError);
  CHECK_THROWS_AS(accuracy_report(ConfusionMatrix()), DataError);
}

TEST_CASE("identity 2x2 matrix") {
  ClassCatalog two({{1, "A", 'A'}, {2, "B", 'B'}});
  ConfusionMatrix cm(two);
  cm.add(1, 1, 7);
  cm.add(2, 2, 3);
  const auto rep = accuracy_report(cm);
  CHECK(*rep.overall.percent == 100.0);
  CHECK(*rep.overall.se == 0.0);
  for (const auto& c : rep.classes) {
    CHECK(*c.users.percent == 100.0);
    CHECK(*c.users.se == 0.0);
    CHECK(*c.producers.se == 0.0);
  }
}

TEST_CASE("confusion is invariant to sample order") {
  Rng rng(5);
  std::vector<int> pred(500), ref(500);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    pred[i] = 1 + static_cast<int>(uniform_below(rng, 8));
    ref[i] = uniform01(rng) < 0.7 ? pred[i] : 1 + static_cast<int>(uniform_below(rng, 8));
  }
  const auto base = confusion(pred, ref);
  std::vector<std::size_t> perm(pred.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  for (int trial = 0; trial < 5; ++trial) {
    shuffle(std::span<std::size_t>(perm), rng);
    std::vector<int> p2, r2;
    for (auto i : perm) {
      p2.push_back(pred[i]);
      r2.push_back(ref[i]);
    }
    CHECK(confusion(p2, r2) == base);
  }
}

TEST_CASE("accuracy report matches direct recounts on random matrices") {
  Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    ConfusionMatrix cm;
    std::vector<std::vector<double>> c(8, std::vector<double>(8, 0));
    for (int p = 1; p <= 8; ++p)
      for (int r = 1; r <= 8; ++r) {
        const auto n = uniform_below(rng, p == r ? 500 : 40);
        cm.add(p, r, n);
        c[p - 1][r - 1] = static_cast<double>(n);
      }
    const auto rep = accuracy_report(cm);
    double diag = 0, total = 0;
    for (int i = 0; i < 8; ++i) {
      diag += c[i][i];
      for (int j = 0; j < 8; ++j) total += c[i][j];
    }
    CHECK(*rep.overall.percent == doctest::Approx(100.0 * diag / total).epsilon(1e-12));
    CHECK(*rep.overall.se == doctest::Approx(se_oracle(diag, total)).epsilon(1e-12));
    for (int k = 0; k < 8; ++k) {
      double row = 0, col = 0;
      for (int j = 0; j < 8; ++j) {
        row += c[k][j];
        col += c[j][k];
      }
      if (row > 0) CHECK(*rep.classes[k].users.percent == doctest::Approx(100.0 * c[k][k] / row).epsilon(1e-12));
      if (col > 0) CHECK(*rep.classes[k].producers.se == doctest::Approx(se_oracle(c[k][k], col)).epsilon(1e-12));
      for (const auto* e : {&rep.classes[k].users, &rep.classes[k].producers})
        if (e->percent) CHECK((*e->percent >= 0.0 && *e->percent <= 100.0));
    }
  }
}

TEST_CASE("reference confusion counts ingested verbatim") {
  const auto cm = read_confusion_csv(kReferenceMatrix);
  CHECK(cm.total() == 69847);
  CHECK(cm.diagonal() == 62966);
  const std::uint64_t rows[] = {2433, 1379, 17692, 15694, 3999, 1153, 2551, 24946};
  const std::uint64_t cols[] = {2398, 1832, 17934, 15164, 4491, 1138, 2502, 24388};
  for (std::size_t k = 0; k < 8; ++k) {
    CHECK(cm.row_total(k) == rows[k]);
    CHECK(cm.column_total(k) == cols[k]);
  }
  const auto rep = accuracy_report(cm);
  CHECK(*rep.overall.percent == doctest::Approx(100.0 * 62966 / 69847).epsilon(1e-12));
  CHECK(std::round(*rep.overall.se * 10) / 10 == 0.1);
  const auto& art = rep.classes[0];
  CHECK(std::round(*art.users.percent * 10) / 10 == 96.1);
  CHECK(std::round(*art.users.se * 10) / 10 == 0.4);
  // The SE worked through from the rounded reported UA.
  CHECK(std::sqrt(0.961 * 0.039 / 2433) * 100 == doctest::Approx(0.39).epsilon(0.01));
  CHECK(*rep.classes[4].users.percent == doctest::Approx(100.0 * 3002 / 3999));
  CHECK(std::round(*rep.classes[4].users.percent * 10) / 10 == 75.1);
  CHECK(std::round(*rep.classes[1].producers.percent * 10) / 10 == 66.5);
  CHECK(std::round(*rep.classes[5].producers.percent * 10) / 10 == 97.5);
  // Woodland UA is 93.4 from the counts.
  CHECK(std::round(*rep.classes[7].users.percent * 10) / 10 == 93.4);
}

TEST_CASE("confusion and report CSV output") {
  landcover::testing::TempDir dir("confusion");
  const auto cm = read_confusion_csv(kReferenceMatrix);
  write_confusion_csv(cm, dir / "cm.csv");
  CHECK(read_confusion_csv(dir / "cm.csv") == cm);
  write_report_csv(accuracy_report(cm), dir / "acc.csv");
  std::ifstream in(dir / "acc.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "measure,class_id,class,percent,se,n");
  const std::string md = format_report(cm, accuracy_report(cm));
  CHECK(md.find("75.1") != std::string::npos);
  std::ofstream(dir / "bad.csv") << "prediction,1,2\n1,3,-1\n2,0,1\n";
  CHECK_THROWS_AS(read_confusion_csv(dir / "bad.csv"), DataError);
}

TEST_CASE("grid accuracy eligibility and bucketing") {
  std::vector<ValidationSample> s;
  // Cell (0, 0): 30 correct samples over two classes.
  for (int i = 0; i < 30; ++i) s.push_back({1000.0 + i, 2000.0, 1 + i % 2, 1 + i % 2});
  // Cell (1, 0): only 5 samples.
  for (int i = 0; i < 5; ++i) s.push_back({150000.0, 10.0, 3, 3});
  // Cell (2, 0): 25 samples of one reference class.
  for (int i = 0; i < 25; ++i) s.push_back({250000.0, 10.0, 3, 3});
  const auto r = grid_accuracy(s, 100000.0);
  REQUIRE(r.cells.size() == 3);
  CHECK(r.cells[0].col == 0);
  CHECK(*r.cells[0].oa == 100.0);
  CHECK(r.cells[0].max_x == 100000.0);
  CHECK_FALSE(r.cells[1].eligible());
  CHECK(r.cells[1].samples == 5);
  CHECK_FALSE(r.cells[2].eligible());
  CHECK(r.cells[2].reference_classes == 1);
  CHECK(r.eligible == 1);
  CHECK(r.histogram[kHistogramBins - 1] == 1);

  CHECK_THROWS_AS(grid_accuracy(s, 0.0), ArgumentError);
  std::vector<ValidationSample> bad = {{std::nan(""), 0.0, 1, 1}};
  CHECK_THROWS_AS(grid_accuracy(bad, 10.0), DataError);
  // Negative coordinates bucket by floor.
  std::vector<ValidationSample> neg = {{-1.0, -1.0, 1, 1}};
  CHECK(grid_accuracy(neg, 10.0, 1).cells[0].col == -1);
}

TEST_CASE("grid accuracy recovers regional rates") {
  Rng rng(31);
  std::vector<ValidationSample> s;
  const int per_cell = 400;
  for (int cx = 0; cx < 6; ++cx)
    for (int cy = 0; cy < 3; ++cy) {
      const double rate = cx < 3 ? 0.95 : 0.70;
      for (int k = 0; k < per_cell; ++k) {
        const int ref = 1 + static_cast<int>(uniform_below(rng, 8));
        int pred = ref;
        if (uniform01(rng) >= rate) pred = 1 + (ref % 8);
        s.push_back({(cx + uniform01(rng)) * 100000.0, (cy + uniform01(rng)) * 100000.0, pred, ref});
      }
    }
  const auto r = grid_accuracy(s, 100000.0);
  REQUIRE(r.eligible == 18);
  for (const auto& c : r.cells) {
    const double rate = c.col < 3 ? 0.95 : 0.70;
    const double tol = 4.0 * std::sqrt(rate * (1 - rate) / per_cell) * 100.0;
    CHECK(std::abs(*c.oa - 100.0 * rate) <= tol);
  }
  std::size_t in_hist = 0;
  for (auto n : r.histogram) in_hist += n;
  CHECK(in_hist == 18);
}

TEST_CASE("area stats perfect agreement") {
  GridSpec g = landcover::testing::small_grid(4, 4, 10.0);
  Raster map(g, 0.0), units(g, 0.0);
  std::vector<ReferenceSample> pts;
  for (int row = 0; row < 4; ++row)
    for (int col = 0; col < 4; ++col) {
      const int cls = col < 2 ? id::cropland : id::woodland;
      map.at(row, col) = cls;
      units.at(row, col) = row < 2 ? 1 : 2;
      pts.push_back({g.center_x(col), g.center_y(row), cls});
    }
  // Unit 2 entirely cropland on the map and in the sample.
  for (int row = 2; row < 4; ++row)
    for (int col = 0; col < 4; ++col) map.at(row, col) = id::cropland;
  for (auto& p : pts)
    if (p.y < g.center_y(1)) p.class_id = id::cropland;
  const auto rep = area_stats(map, units, pts);
  REQUIRE(rep.units.size() == 2);
  CHECK(rep.pooled.r2 == doctest::Approx(1.0));
  CHECK(rep.rmse == doctest::Approx(0.0));
  CHECK(rep.mae == doctest::Approx(0.0));
  const auto& u2 = rep.units[1];
  CHECK(u2.unit_id == 2);
  const std::vector<double> expected = {0, 0, 1, 0, 0, 0, 0, 0};
  CHECK(u2.mapped == expected);
  for (const auto& u : rep.units) {
    double sum = 0;
    for (double v : u.mapped) sum += v;
    CHECK(std::abs(sum - 1.0) <= 1e-9);
  }
  std::vector<ReferenceSample> outside = {{g.origin_x - 100.0, g.origin_y, 1}};
  CHECK_THROWS_AS(area_stats(map, units, outside), DataError);
}

TEST_CASE("area stats excludes units without cells or points") {
  GridSpec g = landcover::testing::small_grid(4, 2, 10.0);
  Raster map(g, 1.0), units(g, 0.0);
  for (int col = 0; col < 4; ++col) {
    units.at(0, col) = 1;
    units.at(1, col) = col < 2 ? 2 : 3;
  }
  map.at(1, 0) = map.nodata();
  map.at(1, 1) = map.nodata();
  const std::vector<ReferenceSample> pts = {{g.center_x(0), g.center_y(0), 1},
                                            {g.center_x(1), g.center_y(0), 3},
                                            {g.center_x(0), g.center_y(1), 1}};
  const auto rep = area_stats(map, units, pts);
  CHECK(rep.excluded_no_valid_cells == 1);
  CHECK(rep.excluded_no_points == 1);
  REQUIRE(rep.units.size() == 1);
  CHECK(rep.units[0].reference[0] == 0.5);
}

TEST_CASE("area stats MAE recovers injected proportion noise") {
  // Six units of 40 x 20 cells with 200 points each. True proportions are
  // k_c / 40; the map shifts four classes by +0.05 and four by -0.05.
  Rng rng(77);
  const int unit_w = 40, unit_h = 20, n_units = 6;
  GridSpec g = landcover::testing::small_grid(unit_w, unit_h * n_units, 10.0);
  Raster map(g, 0.0), units(g, 0.0);
  std::vector<ReferenceSample> pts;
  std::vector<std::vector<double>> mapped_oracle, ref_oracle;
  double abs_sum = 0, sq_sum = 0;
  for (int u = 0; u < n_units; ++u) {
    std::vector<int> k(8, 2);
    for (int extra = 0; extra < 24; ++extra) ++k[uniform_below(rng, 8)];
    std::vector<int> sign = {1, 1, 1, 1, -1, -1, -1, -1};
    shuffle(std::span<int>(sign), rng);
    std::vector<int> cells, points;
    for (int c = 0; c < 8; ++c) {
      cells.insert(cells.end(), 20 * k[c] + 40 * sign[c], c + 1);
      points.insert(points.end(), 5 * k[c], c + 1);
    }
    shuffle(std::span<int>(cells), rng);
    REQUIRE(cells.size() == 800);
    REQUIRE(points.size() == 200);
    std::vector<double> m(8, 0.0), r(8, 0.0);
    for (int i = 0; i < 800; ++i) {
      const int row = u * unit_h + i / unit_w, col = i % unit_w;
      map.at(row, col) = cells[static_cast<std::size_t>(i)];
      units.at(row, col) = u + 1;
      m[cells[static_cast<std::size_t>(i)] - 1] += 1.0 / 800.0;
    }
    for (int i = 0; i < 200; ++i) {
      const int row = u * unit_h + static_cast<int>(uniform_below(rng, unit_h));
      const int col = static_cast<int>(uniform_below(rng, unit_w));
      pts.push_back({g.center_x(col), g.center_y(row), points[static_cast<std::size_t>(i)]});
      r[points[static_cast<std::size_t>(i)] - 1] += 1.0 / 200.0;
    }
    for (int c = 0; c < 8; ++c) {
      abs_sum += std::abs(m[c] - r[c]);
      sq_sum += (m[c] - r[c]) * (m[c] - r[c]);
    }
    mapped_oracle.push_back(m);
    ref_oracle.push_back(r);
  }
  const auto rep = area_stats(map, units, pts);
  REQUIRE(rep.units.size() == static_cast<std::size_t>(n_units));
  for (int u = 0; u < n_units; ++u)
    for (int c = 0; c < 8; ++c) {
      CHECK(rep.units[u].mapped[c] == doctest::Approx(mapped_oracle[u][c]).epsilon(1e-12));
      CHECK(rep.units[u].reference[c] == doctest::Approx(ref_oracle[u][c]).epsilon(1e-12));
    }
  const double n = 8.0 * n_units;
  CHECK(rep.mae == doctest::Approx(abs_sum / n).epsilon(1e-12));
  CHECK(rep.rmse == doctest::Approx(std::sqrt(sq_sum / n)).epsilon(1e-12));
  CHECK(std::abs(rep.mae - 0.05) <= 0.01);
}

TEST_CASE("ordinary least squares") {
  const std::vector<double> x = {0, 1, 2, 3}, y = {1, 3, 5, 7};
  const auto fit = ols(x, y);
  REQUIRE(fit);
  CHECK(fit->slope == doctest::Approx(2.0));
  CHECK(fit->intercept == doctest::Approx(1.0));
  CHECK(fit->r2 == doctest::Approx(1.0));
  const std::vector<double> flat = {2, 2, 2, 2};
  CHECK_FALSE(ols(flat, y));
}

TEST_CASE("reclassification tables") {
  for (const auto& legend : builtin_legends()) {
    const auto t = builtin_table(legend);
    CHECK(t.legend == legend);
    t.validate();
  }
  CHECK(builtin_table("S2GLC").by_name("Peatbogs").target == id::wetland);
  CHECK(builtin_table("CORINE").by_name("Pastures").target == id::grassland);
  CHECK_THROWS_AS(builtin_table("nope"), ArgumentError);

  GridSpec g = landcover::testing::small_grid(3, 1);
  const auto corine = builtin_table("CORINE");
  const int pastures = corine.by_name("Pastures").code;
  Raster map(g, std::vector<double>{static_cast<double>(pastures), -9999.0, static_cast<double>(pastures)});
  const Raster out = reclassify(map, corine);
  CHECK(out.at(0, 0) == id::grassland);
  CHECK_FALSE(out.valid(0, 1));
  Raster unknown(g, std::vector<double>{1.0, 2.0, 99999.0});
  CHECK_THROWS_AS(reclassify(unknown, corine), DataError);
}

TEST_CASE("identity and composed reclassification") {
  Rng rng(3);
  GridSpec g = landcover::testing::small_grid(6, 6);
  Raster map(g, 0.0);
  for (std::size_t i = 0; i < map.size(); ++i) map[i] = uniform01(rng) < 0.1 ? map.nodata() : 1 + uniform_below(rng, 8);
  const auto id_table = ReclassTable::identity();
  CHECK(reclassify(map, id_table) == map);
  CHECK(reclassify(reclassify(map, id_table), id_table) == map);

  ReclassTable merge_woody{"woody", {}};
  for (const auto& c : ClassCatalog::standard().classes())
    merge_woody.entries.push_back({c.id, c.name, c.id == id::shrubland ? id::woodland : c.id});
  const auto s2glc = builtin_table("S2GLC");
  Raster src(g, 0.0);
  for (std::size_t i = 0; i < src.size(); ++i)
    src[i] = s2glc.entries[uniform_below(rng, s2glc.entries.size())].code;
  CHECK(reclassify(src, compose(s2glc, merge_woody)) == reclassify(reclassify(src, s2glc), merge_woody));

  landcover::testing::TempDir dir("reclass");
  write_reclass_json(s2glc, dir / "t.json");
  const auto back = read_reclass_json(dir / "t.json");
  CHECK(back.legend == s2glc.legend);
  REQUIRE(back.entries.size() == s2glc.entries.size());
  for (std::size_t i = 0; i < back.entries.size(); ++i) {
    CHECK(back.entries[i].code == s2glc.entries[i].code);
    CHECK(back.entries[i].target == s2glc.entries[i].target);
  }
  ReclassTable dup{"dup", {{1, "a", 1}, {1, "b", 2}}};
  CHECK_THROWS_AS(dup.validate(), DataError);
}

TEST_CASE("stratified subsample and curve fractions") {
  const auto f = curve_fractions(0.05);
  REQUIRE(f.size() == 20);
  CHECK(f.front() == 1.0);
  CHECK(f.back() == doctest::Approx(0.05));
  CHECK(f[18] == 0.1);

  const auto m = landcover::testing::gaussian_benchmark(400, 4, 2, 1.0, 1, 4);
  const auto half = stratified_subsample(m, 0.25, 9);
  CHECK(half.rows() == 100);
  std::map<int, int> counts;
  for (std::size_t i = 0; i < half.rows(); ++i) ++counts[half.label(i)];
  for (const auto& [cls, n] : counts) CHECK(n == 25);
  for (std::size_t i = 1; i < half.rows(); ++i) CHECK(half.id(i - 1) < half.id(i));
  const auto all = stratified_subsample(m, 1.0, 9);
  CHECK(all.ids() == m.ids());
}

TEST_CASE("sample-size curve at fraction 1.0 equals plain OOB evaluation") {
  const auto m = landcover::testing::gaussian_benchmark(300, 6, 4, 1.0, 2, 3);
  rf::ForestParams params{30, 0, 5};
  const auto curve = sample_size_curve(m, 0.25, 1, params);
  const double oob = rf::oob_evaluate(rf::train(m, params), m).accuracy * 100.0;
  const auto& first = curve.rows.front();
  CHECK(first.fraction == 1.0);
  CHECK(first.class_id == 0);
  CHECK(first.mean == doctest::Approx(oob).epsilon(1e-12));
  CHECK(first.variance == 0.0);
  CHECK(curve.fractions == std::vector<double>{1.0, 0.75, 0.5, 0.25});
}

TEST_CASE("sample-size curve stops before a class disappears") {
  features::FeatureMatrix m({"a"});
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    const double r[] = {uniform01(rng)};
    m.add_row(r, i < 95 ? 1 : 2, landcover::testing::sample_id(static_cast<std::size_t>(i)));
  }
  const auto curve = sample_size_curve(m, 0.2, 2, {10, 0, 1});
  // Class 2 has 5 rows; round(0.2 * 5) = 1 keeps it at every step of 0.2.
  CHECK_FALSE(curve.stopped_at);
  // round(0.05 * 5) = 0 drops it.
  const auto tight = sample_size_curve(m, 0.05, 2, {10, 0, 1});
  REQUIRE(tight.stopped_at);
  CHECK(*tight.stopped_at == doctest::Approx(0.05));
  CHECK(tight.fractions.back() == doctest::Approx(0.1));
}

TEST_CASE("ablation chooses and propagates the best option") {
  const auto sensors = landcover::testing::complementary_sensors(800, 3);
  AblationPlan plan;
  plan.params = {60, 0, 11};
  plan.questions.push_back(
      {"Q3",
       {{"S1", [&](const ChosenOptions&) { return sensors.s1; }},
        {"S2", [&](const ChosenOptions&) { return sensors.s2; }},
        {"S1+S2", [&](const ChosenOptions&) { return sensors.s1s2; }}}});
  std::vector<std::string> seen;
  plan.questions.push_back({"Q4",
                            {{"same", [&](const ChosenOptions& c) {
                                seen.push_back(c.at("Q3"));
                                return sensors.s1s2;
                              }},
                             {"copy", [&](const ChosenOptions&) { return sensors.s1s2; }}}});
  plan.sample_size = SizeQuestion{"Q6", [&](const ChosenOptions&) { return sensors.s1s2; }, 0.5, 2};
  const auto rep = ablation_run(plan);
  REQUIRE(rep.rows.size() == 5);
  const double s1 = rep.rows[0].score.oa, s2 = rep.rows[1].score.oa, both = rep.rows[2].score.oa;
  MESSAGE("S1 " << s1 << " S2 " << s2 << " S1+S2 " << both);
  CHECK(both > s2);
  CHECK(s2 > s1);
  CHECK(rep.chosen.at("Q3") == "S1+S2");
  CHECK(seen == std::vector<std::string>{"S1+S2"});
  // Identical inputs give identical scores; the first listed option wins the tie.
  CHECK(rep.rows[3].score.oa == rep.rows[4].score.oa);
  CHECK(rep.chosen.at("Q4") == "same");
  CHECK(rep.rows[3].chosen);
  CHECK_FALSE(rep.rows[4].chosen);

  REQUIRE(rep.curve);
  const auto direct = sample_size_curve(sensors.s1s2, 0.5, 2, plan.params);
  REQUIRE(rep.curve->rows.size() == direct.rows.size());
  for (std::size_t i = 0; i < direct.rows.size(); ++i) {
    CHECK(rep.curve->rows[i].mean == direct.rows[i].mean);
    CHECK(rep.curve->rows[i].variance == direct.rows[i].variance);
  }

  const auto again = ablation_run(plan);
  for (std::size_t i = 0; i < rep.rows.size(); ++i) CHECK(again.rows[i].score.oa == rep.rows[i].score.oa);
}
