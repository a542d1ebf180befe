#include "lungseg/random_forest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace lungseg {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double gini(long n, long p) {
  const double total = static_cast<double>(n + p);
  if (total == 0.0) return 0.0;
  const double fn = n / total, fp = p / total;
  return 1.0 - fn * fn - fp * fp;
}

struct TreeBuilder {
  const TrainingSet& data;
  int n_features;
  int mtry;
  std::mt19937_64 rng;
  std::vector<TreeNode> nodes;
  std::vector<int> feature_pool;

  TreeBuilder(const TrainingSet& d, int nf, int mtry_, std::uint64_t seed)
      : data(d), n_features(nf), mtry(mtry_), rng(seed), feature_pool(nf) {
    std::iota(feature_pool.begin(), feature_pool.end(), 0);
  }

  int build(std::vector<int>& rows) {
    long cn = 0, cp = 0;
    for (int r : rows) (data.labels[r] == TissueLabel::Tp ? cp : cn)++;

    const int node_id = static_cast<int>(nodes.size());
    nodes.push_back({});
    nodes[node_id].count_n = cn;
    nodes[node_id].count_p = cp;
    if (cn == 0 || cp == 0 || rows.size() < 2) return node_id;  // pure or too small

    // Sample mtry distinct candidate features (partial Fisher-Yates).
    for (int i = 0; i < mtry; ++i) {
      std::uniform_int_distribution<int> pick(i, n_features - 1);
      std::swap(feature_pool[i], feature_pool[pick(rng)]);
    }

    const double parent = gini(cn, cp);
    int best_feature = -1;
    double best_threshold = 0.0, best_gain = 0.0;
    bool found = false;

    std::vector<std::pair<double, TissueLabel>> sorted;
    sorted.reserve(rows.size());
    for (int fi = 0; fi < mtry; ++fi) {
      const int f = feature_pool[fi];
      sorted.clear();
      for (int r : rows) sorted.push_back({data.features[r][f], data.labels[r]});
      std::sort(sorted.begin(), sorted.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      // Thresholds are midpoints between consecutive distinct values.
      long ln = 0, lp = 0;
      for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
        (sorted[i].second == TissueLabel::Tp ? lp : ln)++;
        if (sorted[i].first == sorted[i + 1].first) continue;
        const double thr = sorted[i].first + 0.5 * (sorted[i + 1].first - sorted[i].first);
        const long rn = cn - ln, rp = cp - lp;
        const double nl = static_cast<double>(ln + lp), nr = static_cast<double>(rn + rp);
        const double gain =
            parent - (nl * gini(ln, lp) + nr * gini(rn, rp)) / static_cast<double>(rows.size());
        if (!found || gain > best_gain) {
          found = true;
          best_gain = gain;
          best_feature = f;
          best_threshold = thr;
        }
      }
    }
    if (!found) return node_id;  // all candidate features constant: leaf with mixed votes

    std::vector<int> left_rows, right_rows;
    for (int r : rows)
      (data.features[r][best_feature] < best_threshold ? left_rows : right_rows).push_back(r);
    rows.clear();
    rows.shrink_to_fit();

    nodes[node_id].feature = best_feature;
    nodes[node_id].threshold = best_threshold;
    nodes[node_id].left = build(left_rows);
    nodes[node_id].right = build(right_rows);
    return node_id;
  }
};

void check_finite(const FeatureVector& fv) {
  for (double v : fv.v)
    if (!std::isfinite(v)) throw ParamError("feature vector contains a non-finite value");
}

TissueLabel tree_vote(const DecisionTree& tree, const FeatureVector& fv) {
  int i = 0;
  while (!tree.nodes[i].is_leaf())
    i = (fv[tree.nodes[i].feature] < tree.nodes[i].threshold) ? tree.nodes[i].left
                                                              : tree.nodes[i].right;
  return tree.nodes[i].count_p >= tree.nodes[i].count_n ? TissueLabel::Tp : TissueLabel::Tn;
}

}  // namespace

ForestModel train(const TrainingSet& data, const ForestParams& params) {
  const long n = static_cast<long>(data.size());
  if (n < 2) throw ParamError("training requires at least 2 rows");
  if (data.labels.size() != data.features.size())
    throw ParamError("training set rows/labels length mismatch");
  if (params.n_trees < 1) throw ParamError("n_trees must be >= 1");
  if (!(params.bag_fraction > 0.0) || params.bag_fraction > 1.0)
    throw ParamError("bag_fraction must be in (0, 1]");

  long cn = 0, cp = 0;
  for (TissueLabel l : data.labels) (l == TissueLabel::Tp ? cp : cn)++;
  if (cp == 0) throw Error("training data contains no Tp (pathological) rows");
  if (cn == 0) throw Error("training data contains no Tn (non-pathological) rows");
  for (const auto& fv : data.features) check_finite(fv);

  const int n_features = static_cast<int>(FeatureVector::kSize);
  const int mtry = std::max(1, static_cast<int>(std::llround(std::sqrt(n_features))));
  const long bag_size = std::min<long>(n, static_cast<long>(std::ceil(params.bag_fraction * n)));

  ForestModel model;
  model.params = params;
  model.n_features = n_features;
  model.n_rows = n;
  model.trees.resize(params.n_trees);

  std::vector<int> all_rows(n);
  std::iota(all_rows.begin(), all_rows.end(), 0);

  for (int t = 0; t < params.n_trees; ++t) {
    const std::uint64_t tree_seed = splitmix64(params.rng_seed ^ splitmix64(t + 1));
    std::mt19937_64 rng(tree_seed);

    std::vector<int> bag;
    bag.reserve(bag_size);
    if (params.bootstrap) {
      std::uniform_int_distribution<long> pick(0, n - 1);
      for (long i = 0; i < bag_size; ++i) bag.push_back(static_cast<int>(pick(rng)));
    } else {
      std::vector<int> pool = all_rows;
      for (long i = 0; i < bag_size; ++i) {
        std::uniform_int_distribution<long> pick(i, n - 1);
        std::swap(pool[i], pool[pick(rng)]);
        bag.push_back(pool[i]);
      }
    }
    std::sort(bag.begin(), bag.end());

    TreeBuilder builder(data, n_features, mtry, splitmix64(tree_seed));
    std::vector<int> rows = bag;
    builder.build(rows);
    model.trees[t].nodes = std::move(builder.nodes);
    model.trees[t].bag = std::move(bag);
  }
  return model;
}

Prediction predict(const ForestModel& model, const FeatureVector& fv, double threshold) {
  if (model.trees.empty()) throw ParamError("predict: model has no trees");
  check_finite(fv);
  long votes_p = 0;
  for (const auto& tree : model.trees) votes_p += (tree_vote(tree, fv) == TissueLabel::Tp);
  Prediction pred;
  pred.score = static_cast<double>(votes_p) / static_cast<double>(model.trees.size());
  pred.label = pred.score >= threshold ? TissueLabel::Tp : TissueLabel::Tn;
  return pred;
}

OobReport oob_accuracy(const ForestModel& model, const TrainingSet& data) {
  if (static_cast<long>(data.size()) != model.n_rows)
    throw ParamError("oob_accuracy: data size does not match the trained model");
  OobReport report;
  long correct = 0;
  for (long r = 0; r < model.n_rows; ++r) {
    long votes_p = 0, voters = 0;
    for (const auto& tree : model.trees) {
      if (std::binary_search(tree.bag.begin(), tree.bag.end(), static_cast<int>(r))) continue;
      ++voters;
      votes_p += (tree_vote(tree, data.features[r]) == TissueLabel::Tp);
    }
    if (voters == 0) {
      ++report.skipped;
      continue;
    }
    const TissueLabel vote = (2 * votes_p >= voters) ? TissueLabel::Tp : TissueLabel::Tn;
    correct += (vote == data.labels[r]);
    ++report.evaluated;
  }
  if (report.evaluated > 0)
    report.accuracy = static_cast<double>(correct) / static_cast<double>(report.evaluated);
  return report;
}

// ------------------------------------------------------------------
// Serialization: versioned line-oriented text, doubles at 17 digits.
// ------------------------------------------------------------------

void save_forest(const ForestModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open model file for writing: " + path);
  out.precision(17);
  out << "lungseg-forest 1\n";
  out << "n_features " << model.n_features << "\n";
  out << "n_rows " << model.n_rows << "\n";
  out << "n_trees " << model.params.n_trees << "\n";
  out << "bag_fraction " << model.params.bag_fraction << "\n";
  out << "bootstrap " << (model.params.bootstrap ? 1 : 0) << "\n";
  out << "rng_seed " << model.params.rng_seed << "\n";
  for (std::size_t t = 0; t < model.trees.size(); ++t) {
    const auto& tree = model.trees[t];
    out << "tree " << t << " nodes " << tree.nodes.size() << " bag " << tree.bag.size() << "\n";
    for (std::size_t i = 0; i < tree.bag.size(); ++i)
      out << tree.bag[i] << (i + 1 < tree.bag.size() ? ' ' : '\n');
    if (tree.bag.empty()) out << "\n";
    for (const auto& n : tree.nodes)
      out << n.feature << ' ' << n.threshold << ' ' << n.left << ' ' << n.right << ' ' << n.count_n
          << ' ' << n.count_p << "\n";
  }
  out << "end\n";
  if (!out) throw IoError("short write on model file: " + path);
}

ForestModel load_forest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model file: " + path);

  auto fail = [&](const std::string& what) -> void {
    throw FormatError("malformed model file (" + what + "): " + path);
  };

  std::string word;
  int version = 0;
  in >> word >> version;
  if (word != "lungseg-forest" || version != 1) fail("header");

  ForestModel model;
  int n_trees = 0, bootstrap = 0;
  in >> word >> model.n_features;
  if (word != "n_features") fail("n_features");
  in >> word >> model.n_rows;
  if (word != "n_rows") fail("n_rows");
  in >> word >> n_trees;
  if (word != "n_trees" || n_trees < 1) fail("n_trees");
  in >> word >> model.params.bag_fraction;
  if (word != "bag_fraction") fail("bag_fraction");
  in >> word >> bootstrap;
  if (word != "bootstrap") fail("bootstrap");
  in >> word >> model.params.rng_seed;
  if (word != "rng_seed") fail("rng_seed");
  model.params.n_trees = n_trees;
  model.params.bootstrap = bootstrap != 0;

  model.trees.resize(n_trees);
  for (int t = 0; t < n_trees; ++t) {
    std::size_t idx = 0, n_nodes = 0, n_bag = 0;
    in >> word >> idx;
    if (word != "tree" || idx != static_cast<std::size_t>(t)) fail("tree index");
    in >> word >> n_nodes;
    if (word != "nodes" || n_nodes == 0) fail("node count");
    in >> word >> n_bag;
    if (word != "bag") fail("bag count");
    auto& tree = model.trees[t];
    tree.bag.resize(n_bag);
    for (auto& b : tree.bag) in >> b;
    tree.nodes.resize(n_nodes);
    for (auto& n : tree.nodes)
      in >> n.feature >> n.threshold >> n.left >> n.right >> n.count_n >> n.count_p;
    if (!in) fail("truncated tree block");
  }
  in >> word;
  if (word != "end") fail("missing end marker");
  return model;
}

}  // namespace lungseg
