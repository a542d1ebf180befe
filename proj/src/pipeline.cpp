#include "lungseg/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "lungseg/parallel.hpp"

namespace lungseg {

namespace {

class StageClock {
 public:
  explicit StageClock(std::vector<StageTiming>& sink) : sink_(sink) {}

  template <typename Fn>
  auto run(const std::string& name, Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      record(name, t0);
    } else {
      auto out = fn();
      record(name, t0);
      return out;
    }
  }

  void skipped(const std::string& name) { sink_.push_back({name, 0.0, false}); }

 private:
  void record(const std::string& name, std::chrono::steady_clock::time_point t0) {
    const auto dt = std::chrono::steady_clock::now() - t0;
    sink_.push_back({name, std::chrono::duration<double, std::milli>(dt).count(), true});
  }

  std::vector<StageTiming>& sink_;
};

struct Point2 {
  int x, y;
};

long cross(const Point2& o, const Point2& a, const Point2& b) {
  return static_cast<long>(a.x - o.x) * (b.y - o.y) - static_cast<long>(a.y - o.y) * (b.x - o.x);
}

// Andrew's monotone chain; returns a CCW hull (no repeated endpoint).
std::vector<Point2> convex_hull(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end(),
            [](const Point2& a, const Point2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Point2& a, const Point2& b) { return a.x == b.x && a.y == b.y; }),
            pts.end());
  const std::size_t n = pts.size();
  if (n < 3) return pts;

  std::vector<Point2> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {  // lower
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = n - 1; i-- > 0;) {  // upper
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

// Inclusive point-in-convex-polygon test; degenerate hulls fall back to a
// bounding-box guarded collinearity check.
bool inside_hull(const std::vector<Point2>& hull, int px, int py) {
  if (hull.empty()) return false;
  if (hull.size() == 1) return px == hull[0].x && py == hull[0].y;
  if (hull.size() == 2) {
    const int min_x = std::min(hull[0].x, hull[1].x), max_x = std::max(hull[0].x, hull[1].x);
    const int min_y = std::min(hull[0].y, hull[1].y), max_y = std::max(hull[0].y, hull[1].y);
    return px >= min_x && px <= max_x && py >= min_y && py <= max_y &&
           cross(hull[0], hull[1], {px, py}) == 0;
  }
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Point2& a = hull[i];
    const Point2& b = hull[(i + 1) % hull.size()];
    if (cross(a, b, {px, py}) < 0) return false;
  }
  return true;
}

// Per-row [xlo, xhi] spans of the hull interior; the inside set of a convex
// polygon on a scanline is one contiguous interval, and the interval edges
// move monotonically enough to track incrementally from the previous row.
std::vector<std::pair<int, int>> hull_spans(const std::vector<Point2>& hull, int nx, int ny) {
  std::vector<std::pair<int, int>> spans(ny, {0, -1});
  if (hull.empty()) return spans;
  int min_x = hull[0].x, max_x = hull[0].x, min_y = hull[0].y, max_y = hull[0].y;
  for (const auto& p : hull) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  min_x = std::max(min_x, 0);
  max_x = std::min(max_x, nx - 1);
  int lo = min_x, hi = max_x;
  for (int y = std::max(min_y, 0); y <= std::min(max_y, ny - 1); ++y) {
    lo = std::max(lo, min_x);
    hi = std::min(hi, max_x);
    while (lo > min_x && inside_hull(hull, lo - 1, y)) --lo;
    while (lo <= max_x && !inside_hull(hull, lo, y)) ++lo;
    if (lo > max_x) {
      lo = min_x;
      hi = max_x;
      continue;  // row is empty; reset the trackers
    }
    while (hi < max_x && inside_hull(hull, hi + 1, y)) ++hi;
    while (hi > lo && !inside_hull(hull, hi, y)) --hi;
    spans[y] = {lo, hi};
  }
  return spans;
}

}  // namespace

SearchSpace build_search_space(const Volume& vol, const LabelMask& fc_mask, double bone_hu) {
  if (!fc_mask.same_dims(vol))
    throw ParamError("build_search_space: mask/volume dimension mismatch");

  // Per-slice bone points; a slice owns a hull once it has >= 3 bone voxels.
  std::vector<std::vector<Point2>> bone_pts(vol.nz);
  LabelMask bone(vol.nx, vol.ny, vol.nz);
  for (int z = 0; z < vol.nz; ++z)
    for (int y = 0; y < vol.ny; ++y)
      for (int x = 0; x < vol.nx; ++x)
        if (vol.at(x, y, z) > bone_hu) {
          bone.at(x, y, z) = 1;
          bone_pts[z].push_back({x, y});
        }

  std::vector<int> populated;
  for (int z = 0; z < vol.nz; ++z)
    if (bone_pts[z].size() >= 3) populated.push_back(z);
  if (bone.count_nonzero() == 0)
    throw Error("search space: no bone voxels above " + std::to_string(bone_hu) +
                " HU anywhere (not a thoracic volume?)");
  if (populated.empty())
    throw Error("search space: no axial slice has enough bone voxels for a hull");

  std::vector<std::vector<std::pair<int, int>>> spans(vol.nz);
  for (int z : populated) spans[z] = hull_spans(convex_hull(bone_pts[z]), vol.nx, vol.ny);

  SearchSpace space;
  space.bone_hu = bone_hu;
  space.hull_z_min = populated.front();
  space.hull_z_max = populated.back();
  space.mask = LabelMask(vol.nx, vol.ny, vol.nz);

  for (int z = 0; z < vol.nz; ++z) {
    // Slices without their own hull take the nearest populated slice's.
    int src = z;
    if (bone_pts[z].size() < 3) {
      int best_d = std::numeric_limits<int>::max();
      for (int p : populated) {
        const int d = std::abs(p - z);
        if (d < best_d) {
          best_d = d;
          src = p;
        }
      }
    }
    for (int y = 0; y < vol.ny; ++y) {
      const auto [lo, hi] = spans[src][y];
      for (int x = lo; x <= hi; ++x) {
        if (fc_mask.at(x, y, z) != 0 || bone.at(x, y, z) != 0) continue;
        space.mask.at(x, y, z) = 1;
      }
    }
  }
  return space;
}

ClassifyResult classify_supervoxels(const Volume& vol, const SupervoxelMap& svmap,
                                    const ForestModel& model, const PipelineConfig& config) {
  const auto keypoints = centroids(svmap);

  ClassifyResult out;
  out.records.resize(keypoints.size());
  parallel_for(static_cast<long>(keypoints.size()), config.threads, [&](long i) {
    const auto& [id, voxel] = keypoints[i];
    const FeatureVector fv = extract_descriptor(vol, voxel, config.texture);
    const Prediction pred = predict(model, fv, config.rf_threshold);
    out.records[i] = {id, voxel, pred.score, pred.label, 0};
  });

  std::vector<char> is_tp(svmap.centers.size(), 0);
  std::vector<long> sizes(svmap.centers.size(), 0);
  for (const auto& rec : out.records)
    if (rec.label == TissueLabel::Tp) is_tp[rec.id] = 1;

  out.mask = LabelMask(svmap.nx, svmap.ny, svmap.nz);
  for (std::size_t i = 0; i < svmap.assignment.size(); ++i) {
    const std::int32_t id = svmap.assignment[i];
    if (id == SupervoxelMap::kNone) continue;
    ++sizes[id];
    if (is_tp[id]) out.mask.labels[i] = 1;
  }
  for (auto& rec : out.records) rec.voxels = sizes[rec.id];
  return out;
}

StagePrep run_segmentation_prep(const Volume& vol, const PipelineConfig& config) {
  StagePrep prep;
  StageClock clock(prep.timings);

  prep.band = clock.run("threshold",
                        [&] { return threshold(vol, config.fc_mean, config.band_halfwidth); });
  prep.seeds = clock.run("seeds", [&] { return select_seeds(vol, prep.band, config.seed_rng); });

  const AffinityParams affinity{config.fc_mean, config.fc_sigma, config.fc_theta};
  // Candidates below theta can never survive binarize, so propagation may
  // prune them without changing the initial mask.
  const ConnectivityMap cmap = clock.run("connectivity", [&] {
    return compute_connectivity(vol, prep.seeds, affinity, config.fc_theta);
  });
  prep.initial = clock.run("binarize", [&] { return binarize(cmap, config.fc_theta); });

  prep.space = clock.run("search_space",
                         [&] { return build_search_space(vol, prep.initial, config.bone_hu); });

  const long space_voxels = prep.space.mask.count_nonzero();
  if (!config.per_voxel && space_voxels > 0) {
    SlicParams slic;
    slic.k = config.slic_k > 0
                 ? config.slic_k
                 : std::max<int>(1, static_cast<int>(space_voxels / config.sv_target_volume));
    slic.k = std::min<long>(slic.k, space_voxels);
    slic.compactness = config.slic_compactness;
    slic.max_iters = config.slic_max_iters;
    slic.tol = config.slic_tol;
    prep.svmap = clock.run("slic", [&] { return run_slic(vol, prep.space.mask, slic); });
    prep.slic_ran = true;
  } else {
    clock.skipped("slic");
  }
  return prep;
}

namespace {

// Benchmark mode: one descriptor and verdict per search-space voxel.
LabelMask classify_per_voxel(const Volume& vol, const LabelMask& space, const ForestModel& model,
                             const PipelineConfig& config) {
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < space.labels.size(); ++i)
    if (space.labels[i] != 0) todo.push_back(i);

  LabelMask out(space.nx, space.ny, space.nz);
  parallel_for(static_cast<long>(todo.size()), config.threads, [&](long t) {
    const std::size_t i = todo[t];
    const int z = static_cast<int>(i / (static_cast<std::size_t>(space.nx) * space.ny));
    const int y = static_cast<int>((i / space.nx) % space.ny);
    const int x = static_cast<int>(i % space.nx);
    const FeatureVector fv = extract_descriptor(vol, {x, y, z}, config.texture);
    if (predict(model, fv, config.rf_threshold).label == TissueLabel::Tp) out.labels[i] = 1;
  });
  return out;
}

}  // namespace

PipelineResult run_pipeline(const Volume& vol, const ForestModel& model,
                            const PipelineConfig& config) {
  StagePrep prep = run_segmentation_prep(vol, config);

  PipelineResult result;
  result.seeds = prep.seeds;
  result.initial_mask = std::move(prep.initial);
  result.timings = std::move(prep.timings);
  result.search_space_voxels = prep.space.mask.count_nonzero();
  StageClock clock(result.timings);

  if (result.search_space_voxels == 0) {
    clock.skipped("classify");
    result.pathology_mask = LabelMask(vol.nx, vol.ny, vol.nz);
  } else if (config.per_voxel) {
    result.pathology_mask = clock.run(
        "classify", [&] { return classify_per_voxel(vol, prep.space.mask, model, config); });
  } else {
    ClassifyResult cls = clock.run(
        "classify", [&] { return classify_supervoxels(vol, prep.svmap, model, config); });
    result.pathology_mask = std::move(cls.mask);
    result.records = std::move(cls.records);
    result.slic_k_requested = prep.svmap.k_requested;
    result.slic_k_actual = prep.svmap.k_actual;
    result.slic_grid_interval = prep.svmap.grid_interval;
    result.slic_residuals = prep.svmap.diag.residuals;
  }

  result.final_mask =
      clock.run("fusion", [&] { return mask_union(result.initial_mask, result.pathology_mask); });
  return result;
}

}  // namespace lungseg
