#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lungseg/volume.hpp"

namespace lungseg {

struct Ellipsoid {
  double cx = 0, cy = 0, cz = 0;
  double rx = 1, ry = 1, rz = 1;

  bool contains(double x, double y, double z) const {
    const double a = (x - cx) / rx, b = (y - cy) / ry, c = (z - cz) / rz;
    return a * a + b * b + c * c <= 1.0;
  }
};

enum class BlobKind { Consolidation, GGO };

/// Abnormal texture region carved into a lung: a dense smooth patch
/// (consolidation) or a hazy noisy one (ground-glass opacity).
struct PathologyBlob {
  Ellipsoid shape;
  BlobKind kind = BlobKind::Consolidation;
  double mean_hu = 40.0;
  double noise_sigma = 5.0;

  static PathologyBlob consolidation(const Ellipsoid& shape);
  static PathologyBlob ggo(const Ellipsoid& shape);
};

/// Synthetic thoracic phantom: soft-tissue body, bony rib ring, two lung
/// ellipsoids, optional pathology blobs. All shapes are analytic, so exact
/// ground truth (lungs plus blobs) comes for free.
struct PhantomSpec {
  int nx = 96, ny = 96, nz = 64;
  std::array<double, 3> spacing{1.0, 1.0, 1.0};

  double air_hu = -1000.0, air_noise = 5.0;
  double body_rx = 42.0, body_ry = 42.0;  // elliptic cylinder spanning all z
  double body_hu = 40.0, body_noise = 25.0;
  double ring_outer_rx = 40.0, ring_outer_ry = 40.0;  // bony shell inside the body
  double ring_thickness = 2.0;
  double ring_hu = 700.0, ring_noise = 10.0;
  Ellipsoid lung_left{31, 48, 32, 14, 20, 24};
  Ellipsoid lung_right{65, 48, 32, 14, 20, 24};
  double lung_hu = -550.0, lung_noise = 30.0;
  std::vector<PathologyBlob> blobs;
  std::uint64_t rng_seed = 1;
};

struct PhantomCase {
  Volume volume;
  LabelMask truth;  // whole pathological lung: lung ellipsoids plus blobs
};

/// Canonical desk-scale case: default geometry, blob positions jittered
/// deterministically by seed. A consolidation blob sits near the left chest
/// wall; a GGO blob sits inside the right lung.
PhantomSpec default_phantom(std::uint64_t seed, bool with_consolidation = true,
                            bool with_ggo = true);

/// Rasterize the spec with per-region Gaussian texture noise. Deterministic
/// given the seed. Throws when a blob voxel falls outside both lungs.
PhantomCase generate_phantom(const PhantomSpec& spec);

/// Flat key-value spec file, e.g. `lung_left = 31 48 32 14 20 24` or
/// `blob = ggo 65 52 36 9 9 9`. Unset keys keep their defaults.
PhantomSpec load_phantom_spec(const std::string& path);

}  // namespace lungseg
