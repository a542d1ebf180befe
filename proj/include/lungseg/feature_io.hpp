#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lungseg/random_forest.hpp"
#include "lungseg/texture.hpp"

namespace lungseg {

/// One exported keypoint row: coordinates, owning supervoxel, optional class
/// label, and the 24 descriptor values.
struct FeatureRecord {
  Vec3i keypoint;
  int supervoxel_id = -1;
  std::optional<TissueLabel> label;
  FeatureVector features;
};

/// CSV with header x,y,z,supervoxel[,label],<24 feature names>. The label
/// column is written only when include_label is set (values Tp/Tn).
void write_feature_csv(const std::string& path, const std::vector<FeatureRecord>& records,
                       bool include_label);

/// Parse a feature CSV; the label column is optional on read.
std::vector<FeatureRecord> read_feature_csv(const std::string& path);

/// Collect labeled records into a training set; throws if any label is missing.
TrainingSet to_training_set(const std::vector<FeatureRecord>& records);

}  // namespace lungseg
