#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "lungseg/volume.hpp"

namespace lungseg {

/// Ordered 24-element texture descriptor: 7 co-occurrence features, 11
/// run-length features, 6 histogram features.
struct FeatureVector {
  static constexpr std::size_t kSize = 24;
  static const std::array<const char*, kSize> kNames;

  std::array<double, kSize> v{};

  double operator[](std::size_t i) const { return v[i]; }
  double& operator[](std::size_t i) { return v[i]; }
};

struct TextureParams {
  int glcm_bins = 16;
  int glcm_offset = 2;
  int glrlm_levels = 8;
  int window = 7;               // odd side of the axial ROI window
  double range_min = kHuMin;    // fixed global quantization range
  double range_max = kHuMax;

  void validate() const;
};

/// Dense row-major matrix used for co-occurrence and run-length counts.
struct GrayMatrix {
  int rows = 0, cols = 0;
  std::vector<double> m;

  GrayMatrix() = default;
  GrayMatrix(int r, int c) : rows(r), cols(c), m(static_cast<std::size_t>(r) * c, 0.0) {}
  double at(int i, int j) const { return m[static_cast<std::size_t>(i) * cols + j]; }
  double& at(int i, int j) { return m[static_cast<std::size_t>(i) * cols + j]; }
  double sum() const;
};

/// Uniform binning of [lo, hi] into n_levels bins, top edge inclusive.
std::vector<int> quantize(const std::vector<float>& values, int n_levels, double lo, double hi);

/// Replicate-padded axial (x-y) window of side `side` centered on the keypoint.
std::vector<float> extract_window(const Volume& vol, Vec3i keypoint, int side);

/// Normalized symmetric co-occurrence matrix accumulated over the four 2D
/// directions (0/45/90/135 degrees) at the given offset. Throws when the
/// window admits no voxel pair in any direction.
GrayMatrix glcm(const std::vector<int>& q, int w, int h, int bins, int offset);

/// Energy, Entropy, Correlation, IDM, Inertia, Cluster Shade, Cluster
/// Prominence of a normalized co-occurrence matrix. Correlation is 0 when
/// either marginal deviation vanishes.
std::array<double, 7> glcm_features(const GrayMatrix& m);

/// Run-length counts (levels x max-run) of maximal runs, accumulated over the
/// four 2D directions with unit step.
GrayMatrix glrlm(const std::vector<int>& q, int w, int h, int levels);

/// SRE, LRE, GLN, RLN, RP, LGRE, HGRE, SRLGE, SRHGE, LRLGE, LRHGE with 1-based
/// gray index. n_voxels is the pixel count of the source window (RP = runs/voxels).
std::array<double, 11> glrlm_features(const GrayMatrix& r, long n_voxels);

/// Population mean, variance, skewness, kurtosis (zero when variance is 0),
/// min, max of the raw values.
std::array<double, 6> histogram_features(const std::vector<float>& values);

/// Full 24-element descriptor of the axial window around a keypoint.
FeatureVector extract_descriptor(const Volume& vol, Vec3i keypoint,
                                 const TextureParams& params = {});

}  // namespace lungseg
