#include "landcover/rf/forest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "landcover/core/error.hpp"
#include "landcover/core/parallel.hpp"
#include "landcover/core/random.hpp"

namespace landcover::rf {

using nlohmann::json;

int ForestParams::resolved_mtry(std::size_t feature_count) const {
  if (mtry > 0) return mtry;
  return std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(feature_count)))));
}

void ForestParams::validate(std::size_t feature_count) const {
  if (ntree < 1) throw ArgumentError("ntree must be >= 1");
  if (mtry < 0) throw ArgumentError("mtry must be >= 1 (or 0 for automatic)");
  if (feature_count == 0) throw DataError("training matrix has no features");
  if (static_cast<std::size_t>(resolved_mtry(feature_count)) > feature_count)
    throw ArgumentError("mtry " + std::to_string(mtry) + " exceeds feature count " + std::to_string(feature_count));
}

int Tree::predict_index(std::span<const double> row) const {
  int node = 0;
  while (!nodes[node].is_leaf()) {
    const TreeNode& n = nodes[node];
    node = row[n.feature] <= n.threshold ? n.left : n.right;
  }
  return nodes[node].leaf_class;
}

std::size_t Tree::depth() const {
  std::size_t best = 0;
  std::vector<std::pair<int, std::size_t>> stack = {{0, 0}};
  while (!stack.empty()) {
    auto [node, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    if (!nodes[node].is_leaf()) {
      stack.emplace_back(nodes[node].left, d + 1);
      stack.emplace_back(nodes[node].right, d + 1);
    }
  }
  return best;
}

void Tree::rebuild_mask(std::size_t training_rows) {
  inbag_mask_.assign(training_rows, 0);
  for (std::uint32_t r : inbag) {
    if (r >= training_rows) throw DataError("forest: in-bag row out of range");
    inbag_mask_[r] = 1;
  }
}

double gini_impurity(std::span<const std::uint32_t> counts) {
  double n = 0;
  for (auto c : counts) n += c;
  if (n == 0) return 0.0;
  double sum_sq = 0;
  for (auto c : counts) sum_sq += (c / n) * (c / n);
  return 1.0 - sum_sq;
}

namespace {

struct TrainingData {
  std::vector<std::vector<double>> columns;  // feature-major
  std::vector<int> classes;                  // class index per row
  std::size_t n_classes = 0;
};

int majority(std::span<const std::uint32_t> counts) {
  int best = 0;
  for (std::size_t c = 1; c < counts.size(); ++c)
    if (counts[c] > counts[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
  return best;
}

Tree grow_tree(const TrainingData& data, int mtry, std::uint64_t seed) {
  const std::size_t n = data.classes.size();
  const std::size_t p = data.columns.size();
  const std::size_t k = data.n_classes;
  Rng rng(seed);

  Tree tree;
  std::vector<std::uint32_t> samples(n);
  for (auto& s : samples) s = static_cast<std::uint32_t>(uniform_below(rng, n));
  tree.bootstrap_size = static_cast<std::uint32_t>(n);
  tree.inbag = samples;
  std::sort(tree.inbag.begin(), tree.inbag.end());
  tree.inbag.erase(std::unique(tree.inbag.begin(), tree.inbag.end()), tree.inbag.end());
  tree.rebuild_mask(n);

  std::vector<std::size_t> feature_pool(p);
  std::iota(feature_pool.begin(), feature_pool.end(), 0);
  std::vector<std::pair<double, int>> sorted;
  sorted.reserve(n);
  std::vector<std::uint32_t> counts(k), left(k), right(k);

  struct Pending {
    int node;
    std::size_t begin;
    std::size_t end;
  };
  std::vector<Pending> stack = {{0, 0, n}};
  tree.nodes.emplace_back();

  while (!stack.empty()) {
    const Pending job = stack.back();
    stack.pop_back();
    const std::size_t n_node = job.end - job.begin;

    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = job.begin; i < job.end; ++i) ++counts[static_cast<std::size_t>(data.classes[samples[i]])];
    tree.nodes[job.node].samples = static_cast<std::uint32_t>(n_node);

    auto make_leaf = [&] {
      TreeNode& leaf = tree.nodes[job.node];
      leaf.feature = -1;
      leaf.counts = counts;
      leaf.leaf_class = majority(counts);
    };
    if (std::count(counts.begin(), counts.end(), static_cast<std::uint32_t>(n_node)) == 1) {
      make_leaf();
      continue;
    }

    double parent_sq = 0;
    for (auto c : counts) parent_sq += static_cast<double>(c) * c;

    // Maximising sum_L^2/n_L + sum_R^2/n_R minimises the weighted child Gini.
    double best_score = -1.0;
    std::size_t best_feature = 0;
    double best_threshold = 0.0;
    double best_left_sq = 0, best_right_sq = 0;
    std::size_t best_left_n = 0;

    for (int draw = 0; draw < mtry; ++draw) {
      const std::size_t j = static_cast<std::size_t>(draw) + uniform_below(rng, p - static_cast<std::size_t>(draw));
      std::swap(feature_pool[static_cast<std::size_t>(draw)], feature_pool[j]);
      const std::size_t f = feature_pool[static_cast<std::size_t>(draw)];
      const auto& column = data.columns[f];

      sorted.clear();
      for (std::size_t i = job.begin; i < job.end; ++i) sorted.emplace_back(column[samples[i]], data.classes[samples[i]]);
      std::sort(sorted.begin(), sorted.end());
      if (sorted.front().first == sorted.back().first) continue;

      std::fill(left.begin(), left.end(), 0);
      right = counts;
      double left_sq = 0, right_sq = parent_sq;
      for (std::size_t i = 0; i + 1 < n_node; ++i) {
        const auto c = static_cast<std::size_t>(sorted[i].second);
        left_sq += 2.0 * left[c] + 1.0;
        right_sq -= 2.0 * right[c] - 1.0;
        ++left[c];
        --right[c];
        if (sorted[i].first == sorted[i + 1].first) continue;
        const double n_left = static_cast<double>(i + 1);
        const double n_right = static_cast<double>(n_node - i - 1);
        const double score = left_sq / n_left + right_sq / n_right;
        if (score > best_score) {
          best_score = score;
          best_feature = f;
          const double lo = sorted[i].first;
          const double hi = sorted[i + 1].first;
          double mid = lo + (hi - lo) / 2.0;
          if (!(mid < hi)) mid = lo;
          best_threshold = mid;
          best_left_sq = left_sq;
          best_right_sq = right_sq;
          best_left_n = i + 1;
        }
      }
    }

    if (best_score < 0) {
      make_leaf();
      continue;
    }

    const auto& column = data.columns[best_feature];
    auto middle = std::stable_partition(samples.begin() + static_cast<std::ptrdiff_t>(job.begin),
                                        samples.begin() + static_cast<std::ptrdiff_t>(job.end),
                                        [&](std::uint32_t s) { return column[s] <= best_threshold; });
    const std::size_t split = static_cast<std::size_t>(middle - samples.begin());
    const double nn = static_cast<double>(n_node);
    const double n_left = static_cast<double>(best_left_n);
    const double n_right = nn - n_left;
    const double parent_gini = 1.0 - parent_sq / (nn * nn);
    const double child_gini = ((n_left - best_left_sq / n_left) + (n_right - best_right_sq / n_right)) / nn;

    const int left_id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    const int right_id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    TreeNode& node = tree.nodes[job.node];
    node.feature = static_cast<int>(best_feature);
    node.threshold = best_threshold;
    node.left = left_id;
    node.right = right_id;
    node.gini_decrease = std::max(0.0, parent_gini - child_gini);
    stack.push_back({right_id, split, job.end});
    stack.push_back({left_id, job.begin, split});
  }
  return tree;
}

}  // namespace

Forest train(const FeatureMatrix& matrix, const ForestParams& params) {
  params.validate(matrix.cols());
  if (!matrix.has_labels()) throw DataError("training matrix has no labels");
  Forest forest;
  forest.classes_ = matrix.classes();
  if (forest.classes_.size() < 2) throw DataError("training requires at least two classes");
  forest.mtry_ = params.resolved_mtry(matrix.cols());
  forest.seed_ = params.seed;
  forest.feature_names_ = matrix.feature_names();
  forest.training_ids_ = matrix.ids();

  TrainingData data;
  data.n_classes = forest.classes_.size();
  data.columns.assign(matrix.cols(), std::vector<double>(matrix.rows()));
  for (std::size_t i = 0; i < matrix.rows(); ++i)
    for (std::size_t j = 0; j < matrix.cols(); ++j) data.columns[j][i] = matrix.at(i, j);
  data.classes.resize(matrix.rows());
  for (std::size_t i = 0; i < matrix.rows(); ++i)
    data.classes[i] = static_cast<int>(forest.class_index(matrix.label(i)));

  forest.trees_.resize(static_cast<std::size_t>(params.ntree));
  parallel_for(forest.trees_.size(), [&](std::size_t t) {
    forest.trees_[t] = grow_tree(data, forest.mtry_, derive_seed(params.seed, t));
  });
  return forest;
}

std::size_t Forest::class_index(int class_id) const {
  auto it = std::lower_bound(classes_.begin(), classes_.end(), class_id);
  if (it == classes_.end() || *it != class_id) throw DataError("forest: unknown class " + std::to_string(class_id));
  return static_cast<std::size_t>(it - classes_.begin());
}

Prediction Forest::predict(std::span<const double> row, std::size_t tree_limit) const {
  if (row.size() != feature_names_.size())
    throw DataError("predict: row has " + std::to_string(row.size()) + " values, model expects " +
                    std::to_string(feature_names_.size()));
  const std::size_t limit = tree_limit == 0 ? trees_.size() : std::min(tree_limit, trees_.size());
  std::vector<std::uint32_t> counts(classes_.size(), 0);
  for (std::size_t t = 0; t < limit; ++t) ++counts[static_cast<std::size_t>(trees_[t].predict_index(row))];
  Prediction out;
  out.votes.resize(classes_.size());
  for (std::size_t c = 0; c < counts.size(); ++c) out.votes[c] = static_cast<double>(counts[c]) / static_cast<double>(limit);
  out.class_id = classes_[static_cast<std::size_t>(majority(counts))];
  return out;
}

OobResult oob_evaluate(const Forest& forest, const FeatureMatrix& matrix, std::size_t tree_limit) {
  if (matrix.ids() != forest.training_ids())
    throw DataError("oob: matrix sample ids do not match the forest's training ids");
  const std::size_t limit =
      tree_limit == 0 ? forest.trees().size() : std::min(tree_limit, forest.trees().size());
  OobResult result;
  result.predictions.resize(matrix.rows());
  std::vector<std::uint32_t> counts(forest.classes().size());
  std::size_t correct = 0;
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    std::fill(counts.begin(), counts.end(), 0);
    std::size_t votes = 0;
    for (std::size_t t = 0; t < limit; ++t) {
      const Tree& tree = forest.trees()[t];
      if (tree.in_bag(i)) continue;
      ++counts[static_cast<std::size_t>(tree.predict_index(matrix.row(i)))];
      ++votes;
    }
    if (votes == 0) {
      ++result.never_oob;
      continue;
    }
    const int predicted = forest.classes()[static_cast<std::size_t>(majority(counts))];
    result.predictions[i] = predicted;
    ++result.scored;
    if (predicted == matrix.label(i)) ++correct;
  }
  result.accuracy = result.scored ? static_cast<double>(correct) / static_cast<double>(result.scored) : 0.0;
  return result;
}

std::string Forest::to_json() const {
  json j = json::object();
  j["format"] = "landcover-forest";
  j["version"] = 1;
  j["ntree"] = ntree();
  j["mtry"] = mtry_;
  j["seed"] = seed_;
  j["feature_names"] = feature_names_;
  j["classes"] = classes_;
  j["training_ids"] = training_ids_;
  json trees = json::array();
  for (const Tree& t : trees_) {
    json nodes = json::array();
    for (const TreeNode& n : t.nodes) {
      if (n.is_leaf())
        nodes.push_back(json::array({-1, n.samples, n.leaf_class, n.counts}));
      else
        nodes.push_back(json::array({n.feature, n.threshold, n.left, n.right, n.samples, n.gini_decrease}));
    }
    trees.push_back({{"bootstrap_size", t.bootstrap_size}, {"inbag", t.inbag}, {"nodes", std::move(nodes)}});
  }
  j["trees"] = std::move(trees);
  return j.dump();
}

Forest Forest::from_json(std::string_view text) {
  Forest f;
  try {
    json j = json::parse(text);
    if (j.value("format", std::string()) != "landcover-forest") throw DataError("model: not a landcover forest document");
    if (j.at("version").get<int>() != 1) throw DataError("model: unsupported version");
    f.mtry_ = j.at("mtry").get<int>();
    f.seed_ = j.at("seed").get<std::uint64_t>();
    f.feature_names_ = j.at("feature_names").get<std::vector<std::string>>();
    f.classes_ = j.at("classes").get<std::vector<int>>();
    f.training_ids_ = j.at("training_ids").get<std::vector<std::string>>();
    for (const auto& jt : j.at("trees")) {
      Tree t;
      t.bootstrap_size = jt.at("bootstrap_size").get<std::uint32_t>();
      t.inbag = jt.at("inbag").get<std::vector<std::uint32_t>>();
      for (const auto& jn : jt.at("nodes")) {
        TreeNode n;
        if (jn.at(0).get<int>() < 0) {
          n.samples = jn.at(1).get<std::uint32_t>();
          n.leaf_class = jn.at(2).get<int>();
          n.counts = jn.at(3).get<std::vector<std::uint32_t>>();
        } else {
          n.feature = jn.at(0).get<int>();
          n.threshold = jn.at(1).get<double>();
          n.left = jn.at(2).get<int>();
          n.right = jn.at(3).get<int>();
          n.samples = jn.at(4).get<std::uint32_t>();
          n.gini_decrease = jn.at(5).get<double>();
        }
        t.nodes.push_back(std::move(n));
      }
      t.rebuild_mask(f.training_ids_.size());
      f.trees_.push_back(std::move(t));
    }
    if (static_cast<int>(f.trees_.size()) != j.at("ntree").get<int>()) throw DataError("model: tree count mismatch");
  } catch (const json::exception& e) {
    throw DataError(std::string("model: malformed document: ") + e.what());
  }
  return f;
}

void Forest::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << to_json() << "\n";
  if (!out) throw DataError("write failed: " + path.string());
}

Forest Forest::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  return from_json(std::string(std::istreambuf_iterator<char>(in), {}));
}

}  // namespace landcover::rf
