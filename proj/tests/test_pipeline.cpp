#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "lungseg/evaluation.hpp"
#include "lungseg/pipeline.hpp"

using namespace lungseg;

namespace {

const ForestModel& phantom_model() {
  static const ForestModel model = [] {
    PipelineConfig config;
    return train(build_phantom_training_set({101, 102, 103}, config));
  }();
  return model;
}

// Forest of one single-leaf tree voting a fixed class.
ForestModel constant_model(TissueLabel vote) {
  ForestModel model;
  model.params.n_trees = 1;
  model.n_rows = 2;
  DecisionTree tree;
  TreeNode leaf;
  leaf.count_p = vote == TissueLabel::Tp ? 1 : 0;
  leaf.count_n = vote == TissueLabel::Tp ? 0 : 1;
  tree.nodes.push_back(leaf);
  model.trees.push_back(std::move(tree));
  return model;
}

}  // namespace

TEST_CASE("search space sits inside the rib hull and avoids lung and bone") {
  const PhantomSpec spec = default_phantom(61);
  const PhantomCase pc = generate_phantom(spec);

  PipelineConfig config;
  const LabelMask band = threshold(pc.volume, config.fc_mean, config.band_halfwidth);
  const SeedPair seeds = select_seeds(pc.volume, band, config.seed_rng);
  const AffinityParams affinity_params{config.fc_mean, config.fc_sigma, config.fc_theta};
  const LabelMask fc =
      binarize(compute_connectivity(pc.volume, seeds, affinity_params, config.fc_theta),
               config.fc_theta);

  const SearchSpace space = build_search_space(pc.volume, fc, config.bone_hu);
  CHECK(space.hull_z_min == 0);
  CHECK(space.hull_z_max == spec.nz - 1);

  const double bcx = spec.nx / 2.0, bcy = spec.ny / 2.0;
  long inside_ring = 0, total = 0;
  for (int z = 0; z < spec.nz; ++z)
    for (int y = 0; y < spec.ny; ++y)
      for (int x = 0; x < spec.nx; ++x) {
        if (space.mask.at(x, y, z) == 0) continue;
        ++total;
        CHECK(fc.at(x, y, z) == 0);                    // disjoint from stage one
        CHECK(pc.volume.at(x, y, z) <= config.bone_hu);  // bone excluded
        // hull of ring voxels stays inside the ring's outer ellipse (convexity)
        const double rx = (x - bcx) / spec.ring_outer_rx, ry = (y - bcy) / spec.ring_outer_ry;
        if (rx * rx + ry * ry <= 1.0) ++inside_ring;
      }
  CHECK(total > 0);
  CHECK(inside_ring == total);

  // the disk interior minus lung/bone/stage-one is essentially all captured
  const double inner_rx = spec.ring_outer_rx - spec.ring_thickness - 1.0;
  const double inner_ry = spec.ring_outer_ry - spec.ring_thickness - 1.0;
  long expected = 0, captured = 0;
  for (int z = 0; z < spec.nz; ++z)
    for (int y = 0; y < spec.ny; ++y)
      for (int x = 0; x < spec.nx; ++x) {
        const double rx = (x - bcx) / inner_rx, ry = (y - bcy) / inner_ry;
        if (rx * rx + ry * ry > 1.0) continue;
        if (fc.at(x, y, z) != 0 || pc.volume.at(x, y, z) > config.bone_hu) continue;
        ++expected;
        captured += space.mask.at(x, y, z);
      }
  CHECK(captured >= static_cast<long>(0.99 * expected));
}

TEST_CASE("pathology blobs are reachable: stage one or the search space") {
  const PhantomSpec spec = default_phantom(62);
  const PhantomCase pc = generate_phantom(spec);
  PipelineConfig config;
  const StagePrep prep = run_segmentation_prep(pc.volume, config);

  // Dense consolidation is invisible to stage one and must wait in the
  // search space; hazier GGO may be partially absorbed by stage one already.
  long blob_voxels = 0, covered = 0, consolidation = 0, consolidation_in_space = 0;
  for (int z = 0; z < spec.nz; ++z)
    for (int y = 0; y < spec.ny; ++y)
      for (int x = 0; x < spec.nx; ++x)
        for (const auto& blob : spec.blobs)
          if (blob.shape.contains(x, y, z)) {
            ++blob_voxels;
            covered += (prep.space.mask.at(x, y, z) != 0 || prep.initial.at(x, y, z) != 0);
            if (blob.kind == BlobKind::Consolidation) {
              ++consolidation;
              consolidation_in_space += prep.space.mask.at(x, y, z);
            }
            break;
          }
  CHECK(blob_voxels > 500);
  CHECK(covered == blob_voxels);
  CHECK(consolidation > 500);
  CHECK(consolidation_in_space >= static_cast<long>(0.95 * consolidation));
}

TEST_CASE("a volume with no bone is a search-space error") {
  Volume air(16, 16, 8, -1000.0f);
  const LabelMask fc(16, 16, 8);
  try {
    build_search_space(air, fc, 200.0);
    FAIL("expected Error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("bone") != std::string::npos);
  }
}

TEST_CASE("a stage-one mask covering the hull interior empties the search space") {
  const PhantomCase pc = generate_phantom(default_phantom(63, false, false));
  LabelMask everything(pc.volume.nx, pc.volume.ny, pc.volume.nz);
  for (std::size_t i = 0; i < everything.labels.size(); ++i)
    everything.labels[i] = pc.volume.data[i] <= 200.0f ? 1 : 0;
  const SearchSpace space = build_search_space(pc.volume, everything, 200.0);
  CHECK(space.mask.count_nonzero() == 0);
}

TEST_CASE("pipeline short-circuits on an empty search space") {
  // Everything inside the ring reads parenchyma-like, so stage one absorbs it.
  Volume vol(32, 32, 8, -550.0f);
  for (int z = 0; z < 8; ++z)
    for (int y = 0; y < 32; ++y)
      for (int x = 0; x < 32; ++x) {
        const double r = std::sqrt((x - 16.0) * (x - 16.0) + (y - 16.0) * (y - 16.0));
        if (r >= 13.0 && r <= 15.0) vol.at(x, y, z) = 700.0f;
      }
  const PipelineResult res = run_pipeline(vol, constant_model(TissueLabel::Tp));
  CHECK(res.search_space_voxels == 0);
  CHECK(res.pathology_mask.count_nonzero() == 0);
  bool slic_flagged = false, classify_flagged = false;
  for (const auto& t : res.timings) {
    if (t.name == "slic") slic_flagged = !t.ran;
    if (t.name == "classify") classify_flagged = !t.ran;
  }
  CHECK(slic_flagged);
  CHECK(classify_flagged);
  CHECK(res.final_mask.labels == res.initial_mask.labels);
}

TEST_CASE("classify_supervoxels obeys the model verdict exactly") {
  const PhantomCase pc = generate_phantom(default_phantom(64));
  PipelineConfig config;
  const StagePrep prep = run_segmentation_prep(pc.volume, config);
  REQUIRE(prep.slic_ran);

  const ClassifyResult none =
      classify_supervoxels(pc.volume, prep.svmap, constant_model(TissueLabel::Tn), config);
  CHECK(none.mask.count_nonzero() == 0);

  const ClassifyResult all =
      classify_supervoxels(pc.volume, prep.svmap, constant_model(TissueLabel::Tp), config);
  CHECK(all.mask.labels == prep.space.mask.labels);  // partition covers the space

  for (const auto& rec : all.records) CHECK(rec.voxels > 0);
  CHECK(static_cast<int>(all.records.size()) == prep.svmap.k_actual);
}

TEST_CASE("most consolidation voxels classify as pathology") {
  const PhantomSpec spec = default_phantom(65);
  const PhantomCase pc = generate_phantom(spec);
  PipelineConfig config;
  const PipelineResult res = run_pipeline(pc.volume, phantom_model(), config);

  long blob = 0, hit = 0;
  const auto& shape = spec.blobs[0].shape;  // the consolidation blob
  for (int z = 0; z < spec.nz; ++z)
    for (int y = 0; y < spec.ny; ++y)
      for (int x = 0; x < spec.nx; ++x)
        if (shape.contains(x, y, z)) {
          ++blob;
          hit += res.final_mask.at(x, y, z) != 0;
        }
  CHECK(blob > 500);
  CHECK(hit >= static_cast<long>(0.9 * blob));
}

TEST_CASE("pathology-free phantom: final mask barely differs from stage one") {
  const PhantomCase pc = generate_phantom(default_phantom(66, false, false));
  const PipelineResult res = run_pipeline(pc.volume, phantom_model());
  CHECK(dice(res.final_mask, res.initial_mask) >= 0.99);
}

TEST_CASE("pathological phantom: refinement beats stage one and clears 0.90") {
  const PhantomCase pc = generate_phantom(default_phantom(67));
  const PipelineResult res = run_pipeline(pc.volume, phantom_model());
  const double initial = dice(res.initial_mask, pc.truth);
  const double final_dsc = dice(res.final_mask, pc.truth);
  CHECK(final_dsc >= 0.90);
  CHECK(final_dsc > initial);
}

TEST_CASE("fusion and containment invariants") {
  const PhantomCase pc = generate_phantom(default_phantom(68));
  PipelineConfig config;
  const StagePrep prep = run_segmentation_prep(pc.volume, config);
  const PipelineResult res = run_pipeline(pc.volume, phantom_model(), config);

  for (std::size_t i = 0; i < res.final_mask.labels.size(); ++i) {
    if (res.initial_mask.labels[i]) CHECK(res.final_mask.labels[i] == 1);  // final contains initial
    if (res.pathology_mask.labels[i]) {
      CHECK(prep.space.mask.labels[i] == 1);  // pathology stays inside the search space
      CHECK(pc.volume.data[i] <= config.bone_hu);
    }
  }
}

TEST_CASE("per-voxel mode stays close to keypoint mode") {
  const PhantomCase pc = generate_phantom(default_phantom(69));
  PipelineConfig config;
  const PipelineResult keypoint = run_pipeline(pc.volume, phantom_model(), config);

  PipelineConfig dense = config;
  dense.per_voxel = true;
  dense.threads = 4;
  const PipelineResult voxelwise = run_pipeline(pc.volume, phantom_model(), dense);

  CHECK(voxelwise.records.empty());
  const double gap = std::abs(dice(keypoint.final_mask, pc.truth) -
                              dice(voxelwise.final_mask, pc.truth));
  CHECK(gap <= 0.03);
}

TEST_CASE("identical configs give bit-identical masks") {
  const PhantomCase pc = generate_phantom(default_phantom(70));
  PipelineConfig config;
  const PipelineResult a = run_pipeline(pc.volume, phantom_model(), config);
  const PipelineResult b = run_pipeline(pc.volume, phantom_model(), config);
  CHECK(a.final_mask.labels == b.final_mask.labels);
  CHECK(a.pathology_mask.labels == b.pathology_mask.labels);
  CHECK(a.seeds.left == b.seeds.left);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].score == b.records[i].score);
    CHECK(a.records[i].centroid == b.records[i].centroid);
  }
}

TEST_CASE("every stage reports a duration or a skip flag") {
  const PhantomCase pc = generate_phantom(default_phantom(71));
  const PipelineResult res = run_pipeline(pc.volume, phantom_model());
  const std::vector<std::string> expected = {"threshold", "seeds",  "connectivity", "binarize",
                                             "search_space", "slic", "classify",    "fusion"};
  REQUIRE(res.timings.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(res.timings[i].name == expected[i]);
    if (res.timings[i].ran)
      CHECK(res.timings[i].millis > 0.0);
    else
      CHECK(res.timings[i].millis == 0.0);
  }
  CHECK(res.slic_k_requested > 0);
  CHECK(res.slic_k_actual > 0);
  CHECK_FALSE(res.slic_residuals.empty());
}
