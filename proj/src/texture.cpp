#include "lungseg/texture.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lungseg {

const std::array<const char*, FeatureVector::kSize> FeatureVector::kNames = {
    "Energy", "Entropy", "Correlation", "IDM",   "Inertia",  "CS",       "CP",
    "SRE",    "LRE",     "GLN",         "RLN",   "RP",       "LGRE",     "HGRE",
    "SRLGE",  "SRHGE",   "LRLGE",       "LRHGE", "Mean",     "Variance", "Skewness",
    "Kurtosis", "Min",   "Max"};

void TextureParams::validate() const {
  if (glcm_bins < 2) throw ParamError("glcm_bins must be >= 2");
  if (glrlm_levels < 2) throw ParamError("glrlm_levels must be >= 2");
  if (glcm_offset < 1) throw ParamError("glcm_offset must be >= 1");
  if (window < 1 || window % 2 == 0) throw ParamError("window side must be odd and >= 1");
  if (!(range_max > range_min)) throw ParamError("quantization range is empty");
}

double GrayMatrix::sum() const { return std::accumulate(m.begin(), m.end(), 0.0); }

std::vector<int> quantize(const std::vector<float>& values, int n_levels, double lo, double hi) {
  if (n_levels < 2) throw ParamError("quantize: n_levels must be >= 2");
  if (!(hi > lo)) throw ParamError("quantize: empty range");
  std::vector<int> q(values.size());
  const double scale = n_levels / (hi - lo);
  for (std::size_t i = 0; i < values.size(); ++i) {
    int b = static_cast<int>((values[i] - lo) * scale);
    q[i] = std::max(0, std::min(n_levels - 1, b));
  }
  return q;
}

std::vector<float> extract_window(const Volume& vol, Vec3i keypoint, int side) {
  if (!vol.in_bounds(keypoint.x, keypoint.y, keypoint.z))
    throw ParamError("extract_window: keypoint out of bounds");
  const int half = side / 2;
  std::vector<float> out;
  out.reserve(static_cast<std::size_t>(side) * side);
  for (int dy = -half; dy <= half; ++dy) {
    const int y = std::max(0, std::min(vol.ny - 1, keypoint.y + dy));
    for (int dx = -half; dx <= half; ++dx) {
      const int x = std::max(0, std::min(vol.nx - 1, keypoint.x + dx));
      out.push_back(vol.at(x, y, keypoint.z));
    }
  }
  return out;
}

GrayMatrix glcm(const std::vector<int>& q, int w, int h, int bins, int offset) {
  static constexpr int kDirs[4][2] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}};  // 0,45,90,135 deg
  GrayMatrix m(bins, bins);
  long pairs = 0;
  for (const auto& dir : kDirs) {
    const int dx = dir[0] * offset, dy = dir[1] * offset;
    for (int y = 0; y < h; ++y) {
      const int y2 = y + dy;
      if (y2 < 0 || y2 >= h) continue;
      for (int x = 0; x < w; ++x) {
        const int x2 = x + dx;
        if (x2 < 0 || x2 >= w) continue;
        const int a = q[static_cast<std::size_t>(y) * w + x];
        const int b = q[static_cast<std::size_t>(y2) * w + x2];
        m.at(a, b) += 1.0;
        m.at(b, a) += 1.0;  // symmetrize
        ++pairs;
      }
    }
  }
  if (pairs == 0)
    throw ParamError("glcm: degenerate window, no voxel pair at offset " +
                     std::to_string(offset));
  const double total = 2.0 * pairs;
  for (auto& v : m.m) v /= total;
  return m;
}

std::array<double, 7> glcm_features(const GrayMatrix& m) {
  const int n = m.rows;
  std::vector<double> pi(n, 0.0), pj(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      pi[i] += m.at(i, j);
      pj[j] += m.at(i, j);
    }
  double mu_i = 0.0, mu_j = 0.0;
  for (int i = 0; i < n; ++i) {
    mu_i += i * pi[i];
    mu_j += i * pj[i];
  }
  double var_i = 0.0, var_j = 0.0;
  for (int i = 0; i < n; ++i) {
    var_i += (i - mu_i) * (i - mu_i) * pi[i];
    var_j += (i - mu_j) * (i - mu_j) * pj[i];
  }

  double energy = 0.0, entropy = 0.0, corr = 0.0, idm = 0.0, inertia = 0.0, shade = 0.0,
         prominence = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double p = m.at(i, j);
      energy += p * p;
      if (p > 0.0) entropy -= p * std::log2(p);
      corr += (i - mu_i) * (j - mu_j) * p;
      idm += p / (1.0 + (i - j) * (i - j));
      inertia += (i - j) * (i - j) * p;
      const double c = i + j - mu_i - mu_j;
      shade += c * c * c * p;
      prominence += c * c * c * c * p;
    }
  corr = (var_i > 0.0 && var_j > 0.0) ? corr / std::sqrt(var_i * var_j) : 0.0;
  return {energy, entropy, corr, idm, inertia, shade, prominence};
}

GrayMatrix glrlm(const std::vector<int>& q, int w, int h, int levels) {
  static constexpr int kDirs[4][2] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}};
  const int maxrun = std::max(w, h);
  GrayMatrix r(levels, maxrun);

  auto scan_line = [&](int x, int y, int dx, int dy) {
    int run_level = -1, run_len = 0;
    while (x >= 0 && x < w && y >= 0 && y < h) {
      const int g = q[static_cast<std::size_t>(y) * w + x];
      if (g == run_level) {
        ++run_len;
      } else {
        if (run_len > 0) r.at(run_level, std::min(run_len, maxrun) - 1) += 1.0;
        run_level = g;
        run_len = 1;
      }
      x += dx;
      y += dy;
    }
    if (run_len > 0) r.at(run_level, std::min(run_len, maxrun) - 1) += 1.0;
  };

  for (const auto& dir : kDirs) {
    const int dx = dir[0], dy = dir[1];
    // Start cells: those whose predecessor along (dx, dy) is outside the window.
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const int px = x - dx, py = y - dy;
        if (px >= 0 && px < w && py >= 0 && py < h) continue;
        scan_line(x, y, dx, dy);
      }
  }
  return r;
}

std::array<double, 11> glrlm_features(const GrayMatrix& r, long n_voxels) {
  const int levels = r.rows, maxrun = r.cols;
  double nr = r.sum();
  if (!(nr > 0.0)) throw ParamError("glrlm_features: matrix holds no runs");
  if (n_voxels < 1) throw ParamError("glrlm_features: n_voxels must be >= 1");

  double sre = 0, lre = 0, gln = 0, rln = 0, lgre = 0, hgre = 0, srlge = 0, srhge = 0, lrlge = 0,
         lrhge = 0;
  for (int gi = 0; gi < levels; ++gi) {
    const double g = gi + 1.0;  // 1-based gray index
    double row = 0.0;
    for (int li = 0; li < maxrun; ++li) {
      const double c = r.at(gi, li);
      if (c == 0.0) continue;
      const double l = li + 1.0;
      row += c;
      sre += c / (l * l);
      lre += c * l * l;
      lgre += c / (g * g);
      hgre += c * g * g;
      srlge += c / (g * g * l * l);
      srhge += c * g * g / (l * l);
      lrlge += c * l * l / (g * g);
      lrhge += c * g * g * l * l;
    }
    gln += row * row;
  }
  for (int li = 0; li < maxrun; ++li) {
    double col = 0.0;
    for (int gi = 0; gi < levels; ++gi) col += r.at(gi, li);
    rln += col * col;
  }
  return {sre / nr,   lre / nr,   gln / nr,   rln / nr,   nr / n_voxels, lgre / nr,
          hgre / nr,  srlge / nr, srhge / nr, lrlge / nr, lrhge / nr};
}

std::array<double, 6> histogram_features(const std::vector<float>& values) {
  if (values.empty()) throw ParamError("histogram_features: empty window");
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  float mn = values[0], mx = values[0];
  for (float v : values) {
    mean += v;
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  }
  mean /= n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (float v : values) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  const double skew = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
  const double kurt = m2 > 0.0 ? m4 / (m2 * m2) : 0.0;
  return {mean, m2, skew, kurt, static_cast<double>(mn), static_cast<double>(mx)};
}

FeatureVector extract_descriptor(const Volume& vol, Vec3i keypoint, const TextureParams& params) {
  params.validate();
  const std::vector<float> window = extract_window(vol, keypoint, params.window);
  const int w = params.window, h = params.window;

  const auto q16 = quantize(window, params.glcm_bins, params.range_min, params.range_max);
  const auto co = glcm(q16, w, h, params.glcm_bins, params.glcm_offset);
  const auto f_glcm = glcm_features(co);

  const auto q8 = quantize(window, params.glrlm_levels, params.range_min, params.range_max);
  const auto runs = glrlm(q8, w, h, params.glrlm_levels);
  const auto f_glrlm = glrlm_features(runs, static_cast<long>(window.size()));

  const auto f_hist = histogram_features(window);

  FeatureVector fv;
  std::size_t k = 0;
  for (double f : f_glcm) fv.v[k++] = f;
  for (double f : f_glrlm) fv.v[k++] = f;
  for (double f : f_hist) fv.v[k++] = f;
  return fv;
}

}  // namespace lungseg
