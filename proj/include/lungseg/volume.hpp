#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "lungseg/error.hpp"

namespace lungseg {

// CT attenuation bounds; everything loaded from disk is clamped to this range.
inline constexpr float kHuMin = -1024.0f;
inline constexpr float kHuMax = 3071.0f;

struct Vec3i {
  int x = 0, y = 0, z = 0;
  bool operator==(const Vec3i&) const = default;
};

/// 3D scalar grid of HU values with voxel spacing. Row-major, x fastest:
/// data[x + nx*(y + ny*z)].
struct Volume {
  int nx = 0, ny = 0, nz = 0;
  std::array<double, 3> spacing{1.0, 1.0, 1.0};  // mm per voxel
  std::vector<float> data;

  Volume() = default;
  Volume(int nx_, int ny_, int nz_, float fill = 0.0f,
         std::array<double, 3> spacing_ = {1.0, 1.0, 1.0});

  std::size_t size() const { return static_cast<std::size_t>(nx) * ny * nz; }
  std::size_t index(int x, int y, int z) const {
    return x + static_cast<std::size_t>(nx) * (y + static_cast<std::size_t>(ny) * z);
  }
  bool in_bounds(int x, int y, int z) const {
    return x >= 0 && x < nx && y >= 0 && y < ny && z >= 0 && z < nz;
  }
  float at(int x, int y, int z) const { return data[index(x, y, z)]; }
  float& at(int x, int y, int z) { return data[index(x, y, z)]; }
};

/// Per-voxel small non-negative integer labels aligned to a Volume.
/// Binary masks use only {0, 1}.
struct LabelMask {
  int nx = 0, ny = 0, nz = 0;
  std::vector<std::int32_t> labels;

  LabelMask() = default;
  LabelMask(int nx_, int ny_, int nz_, std::int32_t fill = 0);

  std::size_t size() const { return static_cast<std::size_t>(nx) * ny * nz; }
  std::size_t index(int x, int y, int z) const {
    return x + static_cast<std::size_t>(nx) * (y + static_cast<std::size_t>(ny) * z);
  }
  bool in_bounds(int x, int y, int z) const {
    return x >= 0 && x < nx && y >= 0 && y < ny && z >= 0 && z < nz;
  }
  std::int32_t at(int x, int y, int z) const { return labels[index(x, y, z)]; }
  std::int32_t& at(int x, int y, int z) { return labels[index(x, y, z)]; }

  bool same_dims(const Volume& v) const { return nx == v.nx && ny == v.ny && nz == v.nz; }
  bool same_dims(const LabelMask& m) const { return nx == m.nx && ny == m.ny && nz == m.nz; }
  long count_nonzero() const;
};

/// Binary mask of voxels whose HU lies in the closed band
/// [center - halfwidth, center + halfwidth].
LabelMask threshold(const Volume& vol, double center, double halfwidth);

/// Voxel-wise union of two binary masks (nonzero treated as 1).
LabelMask mask_union(const LabelMask& a, const LabelMask& b);

// -------------------------------------------------------------------
// Raw little-endian scalar I/O. Dims and spacing come from the caller.
// -------------------------------------------------------------------

enum class ScalarFormat { Int16, Float32 };

Volume load_raw(const std::string& path, int nx, int ny, int nz,
                std::array<double, 3> spacing, ScalarFormat fmt);
void save_raw(const Volume& vol, const std::string& path, ScalarFormat fmt);

}  // namespace lungseg
