#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "lungseg/volume.hpp"

namespace lungseg {

/// Cluster center in [v, x, y, z] space: HU intensity plus real voxel coords.
struct ClusterCenter {
  double v = 0.0, x = 0.0, y = 0.0, z = 0.0;
};

struct SlicParams {
  int k = 1;                 // desired number of supervoxels
  double compactness = 10.0; // HU weight of one grid interval of spatial distance
  int max_iters = 10;
  double tol = 1.0;          // residual cutoff (voxel-HU composite)
};

struct SlicDiagnostics {
  std::vector<double> residuals;       // one per iteration
  std::vector<double> mean_distances;  // mean assignment distance D per iteration
  long uncovered = 0;                  // voxels outside every center window (last iteration)
};

/// Per-voxel cluster assignment over a region mask plus per-cluster centers.
/// Out-of-region voxels hold kNone. After run_slic every surviving cluster is
/// non-empty, 6-connected, and ids are contiguous in [0, k_actual).
struct SupervoxelMap {
  static constexpr std::int32_t kNone = -1;

  int nx = 0, ny = 0, nz = 0;
  std::vector<std::int32_t> assignment;
  std::vector<ClusterCenter> centers;
  int k_requested = 0;
  int k_actual = 0;
  int grid_interval = 0;  // S, in voxels
  SlicDiagnostics diag;

  std::size_t index(int x, int y, int z) const {
    return x + static_cast<std::size_t>(nx) * (y + static_cast<std::size_t>(ny) * z);
  }
  std::int32_t at(int x, int y, int z) const { return assignment[index(x, y, z)]; }
};

/// Seed k cluster centers on a regular grid of interval S = round(cbrt(N/k)),
/// N the in-region voxel count. Grid points outside the region snap to the
/// nearest in-region voxel within S/2 or are dropped.
std::vector<ClusterCenter> init_centers(const Volume& vol, const LabelMask& region, int k,
                                        int* grid_interval_out = nullptr);

/// One SLIC iteration: assign every in-region voxel to the minimum-distance
/// center among those whose (2S)^3 window covers it, with
/// D = sqrt(dv^2 + (compactness/S)^2 * ds^2); then move each center to the
/// mean [v,x,y,z] of its members (updated in place and echoed in the map).
/// Returns the L2 residual of the center displacement. Ties break toward the
/// lowest cluster id; voxels covered by no window are assigned to the nearest
/// center unconditionally and counted in diagnostics.
struct AssignResult {
  SupervoxelMap map;
  double residual = 0.0;
};
AssignResult assign_and_update(const Volume& vol, const LabelMask& region,
                               std::vector<ClusterCenter>& centers, double compactness, int S);

/// Iterate assign_and_update until the residual drops below tol or max_iters
/// is reached, then enforce 6-connectivity (fragments relabel to the dominant
/// neighboring supervoxel), drop empty clusters, and compact ids.
SupervoxelMap run_slic(const Volume& vol, const LabelMask& region, const SlicParams& params);

/// One keypoint per supervoxel: the member voxel nearest the real-valued
/// center. Ordered by cluster id.
std::vector<std::pair<int, Vec3i>> centroids(const SupervoxelMap& map);

}  // namespace lungseg
