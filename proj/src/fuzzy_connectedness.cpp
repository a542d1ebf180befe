#include "lungseg/fuzzy_connectedness.hpp"

#include <cmath>
#include <queue>
#include <random>
#include <string>
#include <utility>

namespace lungseg {

namespace {

constexpr int kNbr[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};

}  // namespace

void AffinityParams::validate() const {
  if (!(sigma > 0.0)) throw ParamError("affinity sigma must be > 0");
  if (!(theta > 0.0) || theta > 1.0) throw ParamError("connectivity theta must be in (0, 1]");
}

double affinity(float a, float b, const AffinityParams& params) {
  const double d = 0.5 * (static_cast<double>(a) + b) - params.mean;
  return std::exp(-(d * d) / (2.0 * params.sigma * params.sigma));
}

SeedPair select_seeds(const Volume& vol, const LabelMask& band_mask, std::uint64_t rng_seed,
                      int windows_per_side) {
  if (!band_mask.same_dims(vol)) throw ParamError("select_seeds: mask/volume dimension mismatch");
  if (windows_per_side < 1) throw ParamError("select_seeds: windows_per_side must be >= 1");

  // Eligible window centers: nonzero mask voxels whose 3x3x3 window is in bounds.
  std::vector<Vec3i> half[2];
  const int split = vol.nx / 2;
  for (int z = 1; z < vol.nz - 1; ++z)
    for (int y = 1; y < vol.ny - 1; ++y)
      for (int x = 1; x < vol.nx - 1; ++x)
        if (band_mask.at(x, y, z) != 0) half[x < split ? 0 : 1].push_back({x, y, z});

  std::mt19937_64 rng(rng_seed);
  SeedPair seeds;
  for (int side = 0; side < 2; ++side) {
    const auto& centers = half[side];
    if (centers.empty())
      throw Error(std::string("seed selection failed: no candidate window on the ") +
                  (side == 0 ? "left" : "right") + " side (no lung field in threshold band?)");

    std::uniform_int_distribution<std::size_t> pick(0, centers.size() - 1);
    float best = kHuMax + 1.0f;
    Vec3i best_voxel{};
    for (int w = 0; w < windows_per_side; ++w) {
      const Vec3i c = centers[pick(rng)];
      for (int dz = -1; dz <= 1; ++dz)
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            const float v = vol.at(c.x + dx, c.y + dy, c.z + dz);
            if (v < best) {
              best = v;
              best_voxel = {c.x + dx, c.y + dy, c.z + dz};
            }
          }
    }
    (side == 0 ? seeds.left : seeds.right) = best_voxel;
  }
  return seeds;
}

ConnectivityMap compute_connectivity(const Volume& vol, const SeedPair& seeds,
                                     const AffinityParams& params, double prune_below) {
  params.validate();
  for (const Vec3i& s : {seeds.left, seeds.right})
    if (!vol.in_bounds(s.x, s.y, s.z)) throw ParamError("seed out of volume bounds");

  ConnectivityMap cmap;
  cmap.nx = vol.nx;
  cmap.ny = vol.ny;
  cmap.nz = vol.nz;
  cmap.strength.assign(vol.size(), 0.0);

  // Best-first max-min propagation (Dijkstra with min replaced by max-of-min).
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry> queue;
  for (const Vec3i& s : {seeds.left, seeds.right}) {
    const std::size_t i = vol.index(s.x, s.y, s.z);
    cmap.strength[i] = 1.0;
    queue.push({1.0, i});
  }

  const std::size_t plane = static_cast<std::size_t>(vol.nx) * vol.ny;
  while (!queue.empty()) {
    const auto [s, i] = queue.top();
    queue.pop();
    if (s < cmap.strength[i]) continue;  // stale entry

    const int z = static_cast<int>(i / plane);
    const int y = static_cast<int>((i - z * plane) / vol.nx);
    const int x = static_cast<int>(i % vol.nx);
    for (const auto& d : kNbr) {
      const int xn = x + d[0], yn = y + d[1], zn = z + d[2];
      if (!vol.in_bounds(xn, yn, zn)) continue;
      const std::size_t j = vol.index(xn, yn, zn);
      const double cand = std::min(s, affinity(vol.data[i], vol.data[j], params));
      if (cand > cmap.strength[j] && cand >= prune_below) {
        cmap.strength[j] = cand;
        queue.push({cand, j});
      }
    }
  }
  return cmap;
}

LabelMask binarize(const ConnectivityMap& cmap, double theta) {
  if (!(theta > 0.0) || theta > 1.0) throw ParamError("binarize theta must be in (0, 1]");
  LabelMask mask(cmap.nx, cmap.ny, cmap.nz);
  for (std::size_t i = 0; i < cmap.strength.size(); ++i)
    mask.labels[i] = (cmap.strength[i] >= theta) ? 1 : 0;
  return mask;
}

}  // namespace lungseg
