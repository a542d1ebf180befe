#include "lungseg/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace lungseg {

double dice(const LabelMask& a, const LabelMask& b) {
  if (!a.same_dims(b)) throw ParamError("dice: mask dimension mismatch");
  long na = 0, nb = 0, overlap = 0;
  for (std::size_t i = 0; i < a.labels.size(); ++i) {
    const bool in_a = a.labels[i] != 0, in_b = b.labels[i] != 0;
    na += in_a;
    nb += in_b;
    overlap += (in_a && in_b);
  }
  if (na + nb == 0) return 1.0;  // two empty masks agree perfectly
  return 2.0 * overlap / static_cast<double>(na + nb);
}

EvalReport batch_evaluate(const std::vector<PhantomCase>& cases,
                          const std::vector<std::string>& names, const ForestModel& model,
                          const PipelineConfig& config) {
  if (cases.empty()) throw ParamError("batch_evaluate: no cases");
  if (!names.empty() && names.size() != cases.size())
    throw ParamError("batch_evaluate: names/cases length mismatch");

  EvalReport report;
  double sum = 0.0, sum2 = 0.0;
  long ok = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    EvalCase ec;
    ec.name = names.empty() ? "case-" + std::to_string(i) : names[i];
    ec.truth_voxels = cases[i].truth.count_nonzero();
    try {
      const PipelineResult res = run_pipeline(cases[i].volume, model, config);
      ec.dsc_final = dice(res.final_mask, cases[i].truth);
      ec.dsc_initial = dice(res.initial_mask, cases[i].truth);
      ec.final_voxels = res.final_mask.count_nonzero();
      ec.ok = true;
      sum += ec.dsc_final;
      sum2 += ec.dsc_final * ec.dsc_final;
      ++ok;
    } catch (const std::exception& e) {
      ec.error = e.what();
      ++report.failures;
    }
    report.cases.push_back(std::move(ec));
  }
  if (ok > 0) {
    report.mean_dsc = sum / ok;
    const double var = std::max(0.0, sum2 / ok - report.mean_dsc * report.mean_dsc);
    report.std_dsc = std::sqrt(var);
  }
  return report;
}

TrainingSet build_phantom_training_set(const std::vector<std::uint64_t>& seeds,
                                       const PipelineConfig& config, int tp_target, int tn_target,
                                       int tp_stride, int tn_stride) {
  if (seeds.empty()) throw ParamError("build_phantom_training_set: no phantom seeds");
  if (tp_stride < 1 || tn_stride < 1) throw ParamError("strides must be >= 1");

  PipelineConfig prep_config = config;
  prep_config.per_voxel = true;  // supervoxels are not needed for window sampling

  std::vector<FeatureVector> tp_pool, tn_pool;
  for (const std::uint64_t seed : seeds) {
    const PhantomCase pc = generate_phantom(default_phantom(seed));
    const StagePrep prep = run_segmentation_prep(pc.volume, prep_config);

    for (int z = 0; z < pc.volume.nz; ++z)
      for (int y = 0; y < pc.volume.ny; ++y)
        for (int x = 0; x < pc.volume.nx; ++x) {
          if (prep.space.mask.at(x, y, z) == 0) continue;
          const bool pathological = pc.truth.at(x, y, z) != 0;
          const int stride = pathological ? tp_stride : tn_stride;
          if (x % stride || y % stride || z % stride) continue;
          auto& pool = pathological ? tp_pool : tn_pool;
          pool.push_back(extract_descriptor(pc.volume, {x, y, z}, config.texture));
        }
  }

  // Deterministic subsample down to the target class counts.
  std::mt19937_64 rng(seeds.front() * 0x9e3779b97f4a7c15ULL + 1);
  auto take = [&rng](std::vector<FeatureVector>& pool, int target) {
    std::shuffle(pool.begin(), pool.end(), rng);
    if (static_cast<int>(pool.size()) > target) pool.resize(target);
  };
  take(tp_pool, tp_target);
  take(tn_pool, tn_target);

  TrainingSet set;
  for (const auto& fv : tp_pool) set.push_back(fv, TissueLabel::Tp);
  for (const auto& fv : tn_pool) set.push_back(fv, TissueLabel::Tn);
  if (tp_pool.empty() || tn_pool.empty())
    throw Error("phantom training set is missing a class (no " +
                std::string(tp_pool.empty() ? "Tp" : "Tn") + " samples found)");
  return set;
}

}  // namespace lungseg
