#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lungseg/texture.hpp"

namespace lungseg {

/// Binary tissue classes: pathological vs non-pathological.
enum class TissueLabel : int { Tn = 0, Tp = 1 };

inline const char* to_string(TissueLabel l) { return l == TissueLabel::Tp ? "Tp" : "Tn"; }

struct TrainingSet {
  std::vector<FeatureVector> features;
  std::vector<TissueLabel> labels;

  std::size_t size() const { return features.size(); }
  void push_back(const FeatureVector& fv, TissueLabel label) {
    features.push_back(fv);
    labels.push_back(label);
  }
};

/// Axis-aligned split node. feature < 0 marks a leaf carrying class counts.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1, right = -1;
  long count_n = 0, count_p = 0;

  bool is_leaf() const { return feature < 0; }
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // node 0 is the root
  std::vector<int> bag;         // sorted training row ids this tree saw
};

struct ForestParams {
  int n_trees = 70;
  double bag_fraction = 0.6;  // share of rows per tree, sampled without replacement
  std::uint64_t rng_seed = 17;
  bool bootstrap = false;     // switch to sampling with replacement
};

struct ForestModel {
  ForestParams params;
  int n_features = static_cast<int>(FeatureVector::kSize);
  long n_rows = 0;
  std::vector<DecisionTree> trees;
};

struct Prediction {
  TissueLabel label = TissueLabel::Tn;
  double score = 0.0;  // fraction of trees voting Tp
};

struct OobReport {
  std::optional<double> accuracy;  // empty when no row had an out-of-bag tree
  long evaluated = 0;
  long skipped = 0;
};

/// Grow a bagged ensemble of fully grown Gini trees, sqrt(d) candidate
/// features per node, deterministic given rng_seed. Throws when either class
/// is absent from the data.
ForestModel train(const TrainingSet& data, const ForestParams& params = {});

/// Majority vote; label is Tp iff score >= threshold (ties favor pathology).
Prediction predict(const ForestModel& model, const FeatureVector& fv, double threshold = 0.5);

/// Accuracy over rows judged only by trees whose bag excluded them.
OobReport oob_accuracy(const ForestModel& model, const TrainingSet& data);

/// Versioned text serialization; round-trips predictions exactly.
void save_forest(const ForestModel& model, const std::string& path);
ForestModel load_forest(const std::string& path);

}  // namespace lungseg
