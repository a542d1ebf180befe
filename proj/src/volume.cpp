#include "lungseg/volume.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

namespace lungseg {

namespace {

void check_dims(int nx, int ny, int nz) {
  if (nx <= 0 || ny <= 0 || nz <= 0)
    throw ParamError("volume dims must be positive, got " + std::to_string(nx) + "x" +
                     std::to_string(ny) + "x" + std::to_string(nz));
}

}  // namespace

Volume::Volume(int nx_, int ny_, int nz_, float fill, std::array<double, 3> spacing_)
    : nx(nx_), ny(ny_), nz(nz_), spacing(spacing_) {
  check_dims(nx, ny, nz);
  for (double s : spacing)
    if (!(s > 0.0)) throw ParamError("voxel spacing must be > 0");
  data.assign(size(), fill);
}

LabelMask::LabelMask(int nx_, int ny_, int nz_, std::int32_t fill) : nx(nx_), ny(ny_), nz(nz_) {
  check_dims(nx, ny, nz);
  labels.assign(size(), fill);
}

long LabelMask::count_nonzero() const {
  long n = 0;
  for (std::int32_t v : labels) n += (v != 0);
  return n;
}

LabelMask threshold(const Volume& vol, double center, double halfwidth) {
  if (halfwidth < 0.0) throw ParamError("threshold halfwidth must be >= 0");
  const double lo = center - halfwidth;
  const double hi = center + halfwidth;
  LabelMask mask(vol.nx, vol.ny, vol.nz);
  for (std::size_t i = 0; i < vol.data.size(); ++i) {
    const double v = vol.data[i];
    mask.labels[i] = (v >= lo && v <= hi) ? 1 : 0;
  }
  return mask;
}

LabelMask mask_union(const LabelMask& a, const LabelMask& b) {
  if (!a.same_dims(b)) throw ParamError("mask_union: dimension mismatch");
  LabelMask out(a.nx, a.ny, a.nz);
  for (std::size_t i = 0; i < out.labels.size(); ++i)
    out.labels[i] = (a.labels[i] != 0 || b.labels[i] != 0) ? 1 : 0;
  return out;
}

namespace {

std::size_t scalar_width(ScalarFormat fmt) {
  return fmt == ScalarFormat::Int16 ? 2 : 4;
}

float clamp_hu(float v) {
  if (std::isnan(v)) return kHuMin;
  return std::min(kHuMax, std::max(kHuMin, v));
}

}  // namespace

Volume load_raw(const std::string& path, int nx, int ny, int nz, std::array<double, 3> spacing,
                ScalarFormat fmt) {
  check_dims(nx, ny, nz);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open raw file: " + path);

  const std::size_t n = static_cast<std::size_t>(nx) * ny * nz;
  const std::size_t expected = n * scalar_width(fmt);
  const auto actual = std::filesystem::file_size(path);
  if (actual != expected)
    throw IoError("raw file size mismatch for " + path + ": expected " +
                  std::to_string(expected) + " bytes, got " + std::to_string(actual));

  Volume vol(nx, ny, nz, 0.0f, spacing);
  if (fmt == ScalarFormat::Int16) {
    std::vector<std::int16_t> buf(n);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(expected));
    if (!in) throw IoError("short read on raw file: " + path);
    for (std::size_t i = 0; i < n; ++i) vol.data[i] = clamp_hu(static_cast<float>(buf[i]));
  } else {
    in.read(reinterpret_cast<char*>(vol.data.data()), static_cast<std::streamsize>(expected));
    if (!in) throw IoError("short read on raw file: " + path);
    for (auto& v : vol.data) v = clamp_hu(v);
  }
  return vol;
}

void save_raw(const Volume& vol, const std::string& path, ScalarFormat fmt) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open raw file for writing: " + path);
  if (fmt == ScalarFormat::Int16) {
    std::vector<std::int16_t> buf(vol.data.size());
    for (std::size_t i = 0; i < buf.size(); ++i)
      buf[i] = static_cast<std::int16_t>(std::lround(vol.data[i]));
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size() * 2));
  } else {
    out.write(reinterpret_cast<const char*>(vol.data.data()),
              static_cast<std::streamsize>(vol.data.size() * 4));
  }
  if (!out) throw IoError("short write on raw file: " + path);
}

}  // namespace lungseg
