#pragma once

#include <string>
#include <vector>

#include "lungseg/phantom.hpp"
#include "lungseg/pipeline.hpp"
#include "lungseg/volume.hpp"

namespace lungseg {

/// Dice similarity coefficient 2|a n b| / (|a| + |b|); nonzero voxels count as
/// members. Two empty masks score 1.
double dice(const LabelMask& a, const LabelMask& b);

struct EvalCase {
  std::string name;
  bool ok = false;
  double dsc_final = 0.0;
  double dsc_initial = 0.0;  // stage-one-only score, for the refinement margin
  long truth_voxels = 0;
  long final_voxels = 0;
  std::string error;
};

struct EvalReport {
  std::vector<EvalCase> cases;
  double mean_dsc = 0.0;
  double std_dsc = 0.0;
  long failures = 0;
};

/// Run the full pipeline on every case and aggregate DSC statistics.
/// Per-case failures are recorded, not fatal.
EvalReport batch_evaluate(const std::vector<PhantomCase>& cases,
                          const std::vector<std::string>& names, const ForestModel& model,
                          const PipelineConfig& config);

/// Build a labeled training set from seeded phantoms: descriptors sampled on
/// stride grids inside the search space, pathology rows (truth voxels the
/// initial mask missed) on tp_stride, soft-tissue rows on tn_stride, then a
/// deterministic subsample to the target class counts.
TrainingSet build_phantom_training_set(const std::vector<std::uint64_t>& seeds,
                                       const PipelineConfig& config, int tp_target = 507,
                                       int tn_target = 490, int tp_stride = 2, int tn_stride = 7);

}  // namespace lungseg
