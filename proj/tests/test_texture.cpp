#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "lungseg/texture.hpp"
#include "oracles.hpp"

using namespace lungseg;

namespace {

constexpr double kBinWidth = (3071.0 - (-1024.0)) / 16.0;  // 255.9375 HU

std::vector<float> constant_window(float value, int side = 7) {
  return std::vector<float>(static_cast<std::size_t>(side) * side, value);
}

enum Feature {
  kEnergy = 0, kEntropy, kCorrelation, kIdm, kInertia, kCs, kCp,
  kSre, kLre, kGln, kRln, kRp, kLgre, kHgre, kSrlge, kSrhge, kLrlge, kLrhge,
  kMean, kVariance, kSkewness, kKurtosis, kMin, kMax,
};

}  // namespace

TEST_CASE("quantize: constant, extremes, and a full-range ramp") {
  const auto constant = quantize(constant_window(-550.0f), 16, kHuMin, kHuMax);
  for (std::size_t i = 1; i < constant.size(); ++i) CHECK(constant[i] == constant[0]);

  const auto edges = quantize({kHuMin, kHuMax}, 16, kHuMin, kHuMax);
  CHECK(edges[0] == 0);
  CHECK(edges[1] == 15);  // top edge inclusive

  // Linear ramp across the full range occupies every bin, by direct count.
  const int n = 160;
  std::vector<float> ramp(n);
  for (int i = 0; i < n; ++i)
    ramp[i] = static_cast<float>(kHuMin + (kHuMax - kHuMin) * i / (n - 1.0));
  const auto q = quantize(ramp, 16, kHuMin, kHuMax);
  std::vector<int> counts(16, 0);
  for (int b : q) ++counts[b];
  for (int c : counts) CHECK(c > 0);
}

TEST_CASE("glcm of a constant window is a single diagonal entry") {
  const auto q = quantize(constant_window(-550.0f), 16, kHuMin, kHuMax);
  const GrayMatrix m = glcm(q, 7, 7, 16, 2);
  CHECK(m.sum() == doctest::Approx(1.0).epsilon(1e-12));
  int nonzero = 0;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      if (m.at(i, j) > 0.0) {
        ++nonzero;
        CHECK(i == j);
        CHECK(m.at(i, j) == doctest::Approx(1.0));
      }
  CHECK(nonzero == 1);
}

TEST_CASE("glcm matches the hand-enumerated 4x4 checkerboard at offset 1") {
  // b(x, y) = (x + y) mod 2; hand counts over the four directions give
  // 48 cross-bin and 36 same-bin entries out of 84 symmetrized pairs.
  std::vector<int> q(16);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x) q[y * 4 + x] = (x + y) % 2;

  const GrayMatrix m = glcm(q, 4, 4, 2, 1);
  CHECK(m.at(0, 1) == doctest::Approx(24.0 / 84.0).epsilon(1e-12));
  CHECK(m.at(1, 0) == doctest::Approx(24.0 / 84.0).epsilon(1e-12));
  CHECK(m.at(0, 0) == doctest::Approx(18.0 / 84.0).epsilon(1e-12));
  CHECK(m.at(1, 1) == doctest::Approx(18.0 / 84.0).epsilon(1e-12));

  const auto ref = oracle::glcm_reference(q, 4, 4, 2, 1);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(m.at(i, j) == doctest::Approx(ref[i * 2 + j]).epsilon(1e-12));
}

TEST_CASE("glcm is symmetric on random windows") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const auto w = oracle::random_window(rng);
    const auto q = quantize(w, 16, kHuMin, kHuMax);
    const GrayMatrix m = glcm(q, 7, 7, 16, 2);
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < i; ++j) CHECK(m.at(i, j) == m.at(j, i));
  }
}

TEST_CASE("glcm rejects windows with no pair at the offset") {
  const std::vector<int> q = {0, 1, 1, 0};
  CHECK_THROWS_AS(glcm(q, 2, 2, 16, 2), ParamError);
}

TEST_CASE("glcm features of a constant window") {
  const auto q = quantize(constant_window(100.0f), 16, kHuMin, kHuMax);
  const auto f = glcm_features(glcm(q, 7, 7, 16, 2));
  CHECK(f[0] == doctest::Approx(1.0));   // energy
  CHECK(f[1] == doctest::Approx(0.0));   // entropy
  CHECK(f[2] == doctest::Approx(0.0));   // correlation, sigma = 0 convention
  CHECK(f[3] == doctest::Approx(1.0));   // idm
  CHECK(f[4] == doctest::Approx(0.0));   // inertia
  CHECK(f[5] == doctest::Approx(0.0));   // cluster shade
  CHECK(f[6] == doctest::Approx(0.0));   // cluster prominence
}

TEST_CASE("glcm features of two equal off-diagonal entries") {
  GrayMatrix m(16, 16);
  m.at(0, 1) = 0.5;
  m.at(1, 0) = 0.5;
  const auto f = glcm_features(m);
  CHECK(f[0] == doctest::Approx(0.5));  // energy
  CHECK(f[1] == doctest::Approx(1.0));  // entropy
  CHECK(f[4] == doctest::Approx(1.0));  // inertia
}

TEST_CASE("glcm features match the reference on random windows") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const auto w = oracle::random_window(rng);
    const auto q = quantize(w, 16, kHuMin, kHuMax);
    const auto f = glcm_features(glcm(q, 7, 7, 16, 2));
    const auto ref =
        oracle::glcm_features_reference(oracle::glcm_reference(q, 7, 7, 16, 2), 16);
    for (int i = 0; i < 7; ++i) CHECK(f[i] == doctest::Approx(ref[i]).epsilon(1e-10));
  }
}

TEST_CASE("glrlm of a constant 7x7 window matches the hand count") {
  // Rows: 7 runs of length 7. Columns: 7 more. Each diagonal direction adds
  // runs of lengths 1..7..1, i.e. one run of length 7 and two each of 1..6.
  const auto q = quantize(constant_window(-550.0f), 8, kHuMin, kHuMax);
  const GrayMatrix r = glrlm(q, 7, 7, 8);
  const int g = q[0];
  CHECK(r.at(g, 6) == doctest::Approx(16.0));  // 7 + 7 + 1 + 1 runs of length 7
  for (int len = 1; len <= 6; ++len) CHECK(r.at(g, len - 1) == doctest::Approx(4.0));
  CHECK(r.sum() == doctest::Approx(40.0));
}

TEST_CASE("strictly alternating row yields only length-1 runs") {
  std::vector<int> q(7);
  for (int x = 0; x < 7; ++x) q[x] = x % 2;
  const GrayMatrix r = glrlm(q, 7, 1, 8);
  for (int g = 0; g < 8; ++g)
    for (int len = 2; len <= 7; ++len) CHECK(r.at(g, len - 1) == 0.0);
  CHECK(r.at(0, 0) + r.at(1, 0) > 0.0);
}

TEST_CASE("runs partition each scan line: sum of count*length is 4x the voxels") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const auto w = oracle::random_window(rng);
    const auto q = quantize(w, 8, kHuMin, kHuMax);
    const GrayMatrix r = glrlm(q, 7, 7, 8);
    double covered = 0.0;
    for (int g = 0; g < 8; ++g)
      for (int len = 1; len <= r.cols; ++len) covered += r.at(g, len - 1) * len;
    CHECK(covered == doctest::Approx(4.0 * 49.0));
  }
}

TEST_CASE("glrlm features of single-run matrices") {
  GrayMatrix one_run(8, 7);
  one_run.at(2, 0) = 1.0;  // single run of length 1
  auto f = glrlm_features(one_run, 1);
  CHECK(f[0] == doctest::Approx(1.0));  // SRE
  CHECK(f[1] == doctest::Approx(1.0));  // LRE
  CHECK(f[4] == doctest::Approx(1.0));  // RP

  GrayMatrix two_run(8, 7);
  two_run.at(2, 1) = 1.0;  // single run of length 2
  f = glrlm_features(two_run, 2);
  CHECK(f[0] == doctest::Approx(0.25));
  CHECK(f[1] == doctest::Approx(4.0));
  CHECK(f[4] == doctest::Approx(0.5));
}

TEST_CASE("glrlm features match the reference on random windows") {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 200; ++trial) {
    const auto w = oracle::random_window(rng);
    const auto q = quantize(w, 8, kHuMin, kHuMax);
    const auto f = glrlm_features(glrlm(q, 7, 7, 8), 49);
    int maxrun = 0;
    const auto rref = oracle::glrlm_reference(q, 7, 7, 8, &maxrun);
    const auto ref = oracle::glrlm_features_reference(rref, 8, maxrun, 49);
    for (int i = 0; i < 11; ++i) CHECK(f[i] == doctest::Approx(ref[i]).epsilon(1e-10));
  }
}

TEST_CASE("histogram features: constant and two-point windows") {
  const auto constant = histogram_features(constant_window(-77.0f));
  CHECK(constant[0] == doctest::Approx(-77.0));
  CHECK(constant[1] == doctest::Approx(0.0));
  CHECK(constant[2] == doctest::Approx(0.0));  // skewness, sigma = 0 convention
  CHECK(constant[3] == doctest::Approx(0.0));  // kurtosis, sigma = 0 convention
  CHECK(constant[4] == doctest::Approx(-77.0));
  CHECK(constant[5] == doctest::Approx(-77.0));

  const auto two = histogram_features({-1.0f, 1.0f, -1.0f, 1.0f});
  CHECK(two[0] == doctest::Approx(0.0));
  CHECK(two[1] == doctest::Approx(1.0));
  CHECK(two[2] == doctest::Approx(0.0));
  CHECK(two[3] == doctest::Approx(1.0));
  CHECK(two[4] == doctest::Approx(-1.0));
  CHECK(two[5] == doctest::Approx(1.0));
}

TEST_CASE("histogram features match the reference on random windows") {
  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 200; ++trial) {
    const auto w = oracle::random_window(rng);
    const auto f = histogram_features(w);
    const auto ref = oracle::histogram_reference(w);
    for (int i = 0; i < 6; ++i)
      CHECK(f[i] == doctest::Approx(ref[i]).epsilon(1e-10));
  }
}

TEST_CASE("descriptor at a constant-region keypoint") {
  Volume vol(9, 9, 3, -550.0f);
  const FeatureVector fv = extract_descriptor(vol, {4, 4, 1});
  CHECK(fv[kEnergy] == doctest::Approx(1.0));
  CHECK(fv[kEntropy] == doctest::Approx(0.0));
  CHECK(fv[kIdm] == doctest::Approx(1.0));
  CHECK(fv[kInertia] == doctest::Approx(0.0));
  CHECK(fv[kMean] == doctest::Approx(-550.0));
  CHECK(fv[kVariance] == doctest::Approx(0.0));
  CHECK(fv[kMin] == doctest::Approx(-550.0));
  CHECK(fv[kMax] == doctest::Approx(-550.0));
  CHECK(fv[kRp] == doctest::Approx(40.0 / 49.0));  // 40 runs over 49 voxels
}

TEST_CASE("replicate padding makes corner and interior keypoints agree on constants") {
  Volume vol(9, 9, 3, 40.0f);
  const FeatureVector corner = extract_descriptor(vol, {0, 0, 0});
  const FeatureVector interior = extract_descriptor(vol, {4, 4, 1});
  for (std::size_t i = 0; i < FeatureVector::kSize; ++i) CHECK(corner[i] == interior[i]);
}

TEST_CASE("descriptor equals the full reference on random volumes") {
  std::mt19937_64 rng(46);
  std::uniform_real_distribution<float> hu(kHuMin, kHuMax);
  Volume vol(16, 14, 5);
  for (auto& v : vol.data) v = hu(rng);

  std::uniform_int_distribution<int> px(3, 12), py(3, 10), pz(0, 4);
  for (int trial = 0; trial < 100; ++trial) {
    const Vec3i kp{px(rng), py(rng), pz(rng)};
    const FeatureVector fv = extract_descriptor(vol, kp);
    const auto window = extract_window(vol, kp, 7);
    const auto ref = oracle::descriptor_reference(window, 7, 7, 16, 2, 8, kHuMin, kHuMax);
    for (std::size_t i = 0; i < FeatureVector::kSize; ++i)
      CHECK(fv[i] == doctest::Approx(ref[i]).epsilon(1e-10));
  }
}

TEST_CASE("sub-bin intensity shift leaves all texture features unchanged") {
  // Values centered mid-bin, shift well below the bin width: bins unchanged,
  // so co-occurrence and run-length features are identical and only the raw
  // moments move.
  std::mt19937_64 rng(47);
  std::uniform_int_distribution<int> bin(2, 13);
  Volume vol(16, 14, 3);
  for (auto& v : vol.data)
    v = static_cast<float>(kHuMin + (bin(rng) + 0.5) * kBinWidth);

  const double delta = 20.0;  // far below a quarter bin
  Volume shifted = vol;
  for (auto& v : shifted.data) v += static_cast<float>(delta);

  const Vec3i kp{8, 7, 1};
  const FeatureVector a = extract_descriptor(vol, kp);
  const FeatureVector b = extract_descriptor(shifted, kp);
  for (int i = kEnergy; i <= kLrhge; ++i)
    CHECK(b[i] == doctest::Approx(a[i]).epsilon(1e-12));
  CHECK(b[kMean] == doctest::Approx(a[kMean] + delta).epsilon(1e-6));
  CHECK(b[kMin] == doctest::Approx(a[kMin] + delta).epsilon(1e-6));
  CHECK(b[kMax] == doctest::Approx(a[kMax] + delta).epsilon(1e-6));
  CHECK(b[kVariance] == doctest::Approx(a[kVariance]).epsilon(1e-6));
  CHECK(b[kSkewness] == doctest::Approx(a[kSkewness]).epsilon(1e-6));
  CHECK(b[kKurtosis] == doctest::Approx(a[kKurtosis]).epsilon(1e-6));
}

TEST_CASE("one-bin shift on bin-aligned data preserves level-free features") {
  // Shift by one run-length level, which is exactly two co-occurrence bins:
  // both quantized grids move uniformly, so features that depend only on bin
  // differences or run structure are unchanged; gray-level-weighted
  // run-length features move with the levels, as they must.
  constexpr double kLevelWidth = (3071.0 - (-1024.0)) / 8.0;  // 511.875 HU
  std::mt19937_64 rng(48);
  std::uniform_int_distribution<int> level(1, 5);
  Volume vol(16, 14, 3);
  // quarter-bin offset keeps values safely inside their bin across the shift
  for (auto& v : vol.data) v = static_cast<float>(kHuMin + (level(rng) + 0.25) * kLevelWidth);

  Volume shifted = vol;
  for (auto& v : shifted.data) v += static_cast<float>(kLevelWidth);

  const Vec3i kp{8, 7, 1};
  const FeatureVector a = extract_descriptor(vol, kp);
  const FeatureVector b = extract_descriptor(shifted, kp);
  for (int i : {kEnergy, kEntropy, kCorrelation, kIdm, kInertia, kCs, kCp, kSre, kLre, kGln,
                kRln, kRp})
    CHECK(b[i] == doctest::Approx(a[i]).epsilon(1e-9));
  CHECK(b[kMean] == doctest::Approx(a[kMean] + kLevelWidth).epsilon(1e-6));
  CHECK(b[kVariance] == doctest::Approx(a[kVariance]).epsilon(1e-6));
  CHECK(b[kSkewness] == doctest::Approx(a[kSkewness]).epsilon(1e-6));
  CHECK(b[kKurtosis] == doctest::Approx(a[kKurtosis]).epsilon(1e-6));
}

TEST_CASE("90-degree window rotation leaves texture features unchanged") {
  std::mt19937_64 rng(49);
  for (int trial = 0; trial < 30; ++trial) {
    const auto w = oracle::random_window(rng);
    std::vector<float> rotated(w.size());
    for (int y = 0; y < 7; ++y)
      for (int x = 0; x < 7; ++x) rotated[x * 7 + (6 - y)] = w[y * 7 + x];

    const auto fa = oracle::descriptor_reference(w, 7, 7, 16, 2, 8, kHuMin, kHuMax);

    const auto q16 = quantize(rotated, 16, kHuMin, kHuMax);
    const auto f7 = glcm_features(glcm(q16, 7, 7, 16, 2));
    const auto q8 = quantize(rotated, 8, kHuMin, kHuMax);
    const auto f11 = glrlm_features(glrlm(q8, 7, 7, 8), 49);
    for (int i = 0; i < 7; ++i) CHECK(f7[i] == doctest::Approx(fa[i]).epsilon(1e-10));
    for (int i = 0; i < 11; ++i) CHECK(f11[i] == doctest::Approx(fa[7 + i]).epsilon(1e-10));
  }
}

TEST_CASE("parameter validation") {
  TextureParams params;
  params.window = 6;
  CHECK_THROWS_AS(params.validate(), ParamError);
  params.window = 7;
  params.glcm_bins = 1;
  CHECK_THROWS_AS(params.validate(), ParamError);
  CHECK_THROWS_AS(quantize({0.0f}, 1, kHuMin, kHuMax), ParamError);
  Volume vol(4, 4, 4);
  CHECK_THROWS_AS(extract_window(vol, {9, 0, 0}, 7), ParamError);
  GrayMatrix empty(8, 7);
  CHECK_THROWS_AS(glrlm_features(empty, 49), ParamError);
}
