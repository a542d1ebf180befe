#pragma once

#include <string>
#include <vector>

#include "lungseg/fuzzy_connectedness.hpp"
#include "lungseg/random_forest.hpp"
#include "lungseg/slic.hpp"
#include "lungseg/texture.hpp"
#include "lungseg/volume.hpp"

namespace lungseg {

/// Abnormality search region: rib-cage hull interior minus the initial
/// parenchyma mask minus bone.
struct SearchSpace {
  LabelMask mask;
  double bone_hu = 200.0;
  int hull_z_min = -1, hull_z_max = -1;  // axial range of slices with their own hull
};

struct SupervoxelRecord {
  int id = -1;
  Vec3i centroid;
  double score = 0.0;
  TissueLabel label = TissueLabel::Tn;
  long voxels = 0;
};

struct StageTiming {
  std::string name;
  double millis = 0.0;
  bool ran = true;
};

struct PipelineConfig {
  // Stage one: threshold band and connectivity.
  double fc_mean = -550.0;
  double fc_sigma = 150.0;
  double fc_theta = 0.5;
  double band_halfwidth = 150.0;
  std::uint64_t seed_rng = 7;

  // Search space.
  double bone_hu = 200.0;

  // Supervoxels: k = search-space voxels / sv_target_volume unless slic_k > 0.
  int slic_k = 0;
  int sv_target_volume = 350;
  double slic_compactness = 10.0;
  int slic_max_iters = 10;
  double slic_tol = 1.0;

  // Classification.
  double rf_threshold = 0.5;
  bool per_voxel = false;  // classify every search-space voxel (benchmark mode)
  int threads = 1;
  TextureParams texture;
};

/// Intermediate products up to (and including) supervoxelization.
struct StagePrep {
  LabelMask band;
  SeedPair seeds;
  LabelMask initial;
  SearchSpace space;
  SupervoxelMap svmap;  // empty in per-voxel mode or when the space is empty
  bool slic_ran = false;
  std::vector<StageTiming> timings;
};

struct PipelineResult {
  LabelMask initial_mask;
  LabelMask pathology_mask;
  LabelMask final_mask;
  SeedPair seeds;
  std::vector<SupervoxelRecord> records;
  std::vector<StageTiming> timings;
  long search_space_voxels = 0;
  int slic_k_requested = 0, slic_k_actual = 0, slic_grid_interval = 0;
  std::vector<double> slic_residuals;
};

/// Bone mask (> bone_hu), per-axial-slice 2D convex hulls of the bone voxels
/// (slices with < 3 bone voxels borrow the nearest populated slice's hull),
/// then hull interior minus initial mask minus bone. Throws when the volume
/// contains no bone at all.
SearchSpace build_search_space(const Volume& vol, const LabelMask& fc_mask,
                               double bone_hu = 200.0);

/// Descriptor + forest verdict at every supervoxel centroid; a Tp verdict
/// labels the whole supervoxel.
struct ClassifyResult {
  LabelMask mask;
  std::vector<SupervoxelRecord> records;
};
ClassifyResult classify_supervoxels(const Volume& vol, const SupervoxelMap& svmap,
                                    const ForestModel& model, const PipelineConfig& config);

/// Stages up to supervoxels: threshold, seeds, connectivity, binarize,
/// search space, SLIC (skipped in per-voxel mode or on an empty space).
StagePrep run_segmentation_prep(const Volume& vol, const PipelineConfig& config);

/// Full two-stage segmentation; deterministic given the config seeds.
PipelineResult run_pipeline(const Volume& vol, const ForestModel& model,
                            const PipelineConfig& config = {});

}  // namespace lungseg
