#pragma once

#include <cstdint>
#include <vector>

#include "lungseg/volume.hpp"

namespace lungseg {

/// Affinity parameters: Gaussian homogeneity around the parenchyma mean.
struct AffinityParams {
  double mean = -550.0;   // HU
  double sigma = 150.0;   // HU, > 0
  double theta = 0.5;     // connectivity cutoff in (0, 1]

  void validate() const;
};

/// One seed voxel per lung, found automatically from the threshold band mask.
struct SeedPair {
  Vec3i left, right;
};

/// Per-voxel connectivity strength in [0, 1]; seeds carry exactly 1.
struct ConnectivityMap {
  int nx = 0, ny = 0, nz = 0;
  std::vector<double> strength;

  std::size_t index(int x, int y, int z) const {
    return x + static_cast<std::size_t>(nx) * (y + static_cast<std::size_t>(ny) * z);
  }
  double at(int x, int y, int z) const { return strength[index(x, y, z)]; }
};

/// Pairwise affinity of two HU values: exp(-((avg - mean)^2) / (2 sigma^2)).
double affinity(float a, float b, const AffinityParams& params);

/// Pick one seed per lateral half (split at x = nx/2): sample
/// `windows_per_side` 3x3x3 windows centered on nonzero band-mask voxels and
/// return the minimum-HU voxel over the sampled windows of each half.
/// Deterministic given rng_seed. Throws Error naming the side when a half has
/// no eligible window center.
SeedPair select_seeds(const Volume& vol, const LabelMask& band_mask, std::uint64_t rng_seed,
                      int windows_per_side = 10);

/// Fuzzy connectedness: strength(c) = max over paths from any seed of the
/// minimum pairwise affinity along the path, over 6-connected neighbors.
/// Computed with best-first propagation. `prune_below` skips propagation of
/// candidate strengths below the given value; voxels binarized at
/// theta >= prune_below are unaffected (0 keeps exact semantics everywhere).
ConnectivityMap compute_connectivity(const Volume& vol, const SeedPair& seeds,
                                     const AffinityParams& params, double prune_below = 0.0);

/// Label 1 iff strength >= theta.
LabelMask binarize(const ConnectivityMap& cmap, double theta);

}  // namespace lungseg
