#include "lungseg/nifti.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

namespace lungseg {

namespace {

constexpr std::int16_t kDtInt16 = 4;
constexpr std::int16_t kDtFloat32 = 16;

struct Nifti1Header {  // 348 bytes, naturally packed
  std::int32_t sizeof_hdr;
  char data_type[10];
  char db_name[18];
  std::int32_t extents;
  std::int16_t session_error;
  char regular;
  char dim_info;
  std::int16_t dim[8];
  float intent_p1, intent_p2, intent_p3;
  std::int16_t intent_code;
  std::int16_t datatype;
  std::int16_t bitpix;
  std::int16_t slice_start;
  float pixdim[8];
  float vox_offset;
  float scl_slope;
  float scl_inter;
  std::int16_t slice_end;
  char slice_code;
  char xyzt_units;
  float cal_max, cal_min;
  float slice_duration;
  float toffset;
  std::int32_t glmax, glmin;
  char descrip[80];
  char aux_file[24];
  std::int16_t qform_code, sform_code;
  float quatern_b, quatern_c, quatern_d;
  float qoffset_x, qoffset_y, qoffset_z;
  float srow_x[4], srow_y[4], srow_z[4];
  char intent_name[16];
  char magic[4];
};
static_assert(sizeof(Nifti1Header) == 348, "NIfTI-1 header must be 348 bytes");

void swap2(void* p) {
  auto* b = static_cast<unsigned char*>(p);
  std::swap(b[0], b[1]);
}

void swap4(void* p) {
  auto* b = static_cast<unsigned char*>(p);
  std::swap(b[0], b[3]);
  std::swap(b[1], b[2]);
}

void swap_header(Nifti1Header& h) {
  swap4(&h.sizeof_hdr);
  for (auto& d : h.dim) swap2(&d);
  swap2(&h.datatype);
  swap2(&h.bitpix);
  for (auto& p : h.pixdim) swap4(&p);
  swap4(&h.vox_offset);
  swap4(&h.scl_slope);
  swap4(&h.scl_inter);
}

struct RawNifti {
  Nifti1Header hdr{};
  std::vector<float> values;  // unscaled
  int nx = 0, ny = 0, nz = 0;
  std::array<double, 3> spacing{1.0, 1.0, 1.0};
};

RawNifti read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open NIfTI file: " + path);

  RawNifti r;
  in.read(reinterpret_cast<char*>(&r.hdr), sizeof(Nifti1Header));
  if (!in) throw FormatError("NIfTI header truncated: " + path);

  // gzip starts with 1f 8b; give a pointed message instead of "bad magic"
  const auto* first = reinterpret_cast<const unsigned char*>(&r.hdr);
  if (first[0] == 0x1f && first[1] == 0x8b)
    throw FormatError("gzip-compressed NIfTI is not supported, decompress first: " + path);

  bool swapped = false;
  if (r.hdr.sizeof_hdr != 348) {
    std::int32_t s = r.hdr.sizeof_hdr;
    swap4(&s);
    if (s != 348) throw FormatError("bad sizeof_hdr (not a NIfTI-1 file): " + path);
    swapped = true;
    swap_header(r.hdr);
  }
  if (std::strncmp(r.hdr.magic, "n+1", 3) != 0)
    throw FormatError("bad magic (expected single-file \"n+1\"): " + path);
  if (r.hdr.dim[0] != 3)
    throw FormatError("unsupported dim[0]=" + std::to_string(r.hdr.dim[0]) +
                      " (only 3D volumes): " + path);
  if (r.hdr.datatype != kDtInt16 && r.hdr.datatype != kDtFloat32)
    throw FormatError("unsupported datatype=" + std::to_string(r.hdr.datatype) +
                      " (only int16 or float32): " + path);

  r.nx = r.hdr.dim[1];
  r.ny = r.hdr.dim[2];
  r.nz = r.hdr.dim[3];
  if (r.nx <= 0 || r.ny <= 0 || r.nz <= 0)
    throw FormatError("non-positive dim[1..3]: " + path);
  for (int i = 0; i < 3; ++i) {
    const float p = r.hdr.pixdim[i + 1];
    r.spacing[i] = (p > 0.0f) ? p : 1.0;
  }

  const std::size_t n = static_cast<std::size_t>(r.nx) * r.ny * r.nz;
  const auto offset = static_cast<std::streamoff>(std::max(r.hdr.vox_offset, 348.0f));
  in.seekg(offset);
  r.values.resize(n);

  if (r.hdr.datatype == kDtInt16) {
    std::vector<std::int16_t> buf(n);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(n * 2));
    if (!in) throw FormatError("NIfTI data truncated: " + path);
    if (swapped)
      for (auto& v : buf) swap2(&v);
    for (std::size_t i = 0; i < n; ++i) r.values[i] = static_cast<float>(buf[i]);
  } else {
    in.read(reinterpret_cast<char*>(r.values.data()), static_cast<std::streamsize>(n * 4));
    if (!in) throw FormatError("NIfTI data truncated: " + path);
    if (swapped)
      for (auto& v : r.values) swap4(&v);
  }
  return r;
}

double apply_scl(const Nifti1Header& h, double raw) {
  return (h.scl_slope != 0.0f) ? raw * h.scl_slope + h.scl_inter : raw;
}

Nifti1Header make_header(int nx, int ny, int nz, std::array<double, 3> spacing,
                         std::int16_t datatype) {
  Nifti1Header h;
  std::memset(&h, 0, sizeof(h));
  h.sizeof_hdr = 348;
  h.dim[0] = 3;
  h.dim[1] = static_cast<std::int16_t>(nx);
  h.dim[2] = static_cast<std::int16_t>(ny);
  h.dim[3] = static_cast<std::int16_t>(nz);
  for (int i = 4; i < 8; ++i) h.dim[i] = 1;
  h.datatype = datatype;
  h.bitpix = (datatype == kDtInt16) ? 16 : 32;
  h.pixdim[0] = 1.0f;
  for (int i = 0; i < 3; ++i) h.pixdim[i + 1] = static_cast<float>(spacing[i]);
  h.vox_offset = 352.0f;
  h.scl_slope = 1.0f;
  h.scl_inter = 0.0f;
  h.xyzt_units = 2;  // millimeters
  std::strncpy(h.descrip, "lungseg", sizeof(h.descrip) - 1);
  h.magic[0] = 'n';
  h.magic[1] = '+';
  h.magic[2] = '1';
  return h;
}

void write_file(const std::string& path, const Nifti1Header& hdr, const void* payload,
                std::size_t bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open NIfTI file for writing: " + path);
  out.write(reinterpret_cast<const char*>(&hdr), sizeof(hdr));
  const char ext[4] = {0, 0, 0, 0};  // no extensions
  out.write(ext, 4);
  out.write(static_cast<const char*>(payload), static_cast<std::streamsize>(bytes));
  if (!out) throw IoError("short write on NIfTI file: " + path);
}

}  // namespace

Volume load_nifti(const std::string& path) {
  RawNifti r = read_file(path);
  Volume vol(r.nx, r.ny, r.nz, 0.0f, r.spacing);
  for (std::size_t i = 0; i < r.values.size(); ++i) {
    double hu = apply_scl(r.hdr, r.values[i]);
    if (std::isnan(hu)) hu = kHuMin;
    vol.data[i] = static_cast<float>(std::min<double>(kHuMax, std::max<double>(kHuMin, hu)));
  }
  return vol;
}

LabelMask load_mask_nifti(const std::string& path) {
  RawNifti r = read_file(path);
  LabelMask mask(r.nx, r.ny, r.nz);
  for (std::size_t i = 0; i < r.values.size(); ++i)
    mask.labels[i] = static_cast<std::int32_t>(std::llround(apply_scl(r.hdr, r.values[i])));
  return mask;
}

void save_mask_nifti(const LabelMask& mask, const std::string& path) {
  std::vector<std::int16_t> buf(mask.labels.size());
  for (std::size_t i = 0; i < buf.size(); ++i) {
    const std::int32_t v = mask.labels[i];
    if (v < 0 || v > std::numeric_limits<std::int16_t>::max())
      throw ParamError("label " + std::to_string(v) + " does not fit int16 NIfTI output");
    buf[i] = static_cast<std::int16_t>(v);
  }
  const auto hdr = make_header(mask.nx, mask.ny, mask.nz, {1.0, 1.0, 1.0}, kDtInt16);
  write_file(path, hdr, buf.data(), buf.size() * 2);
}

void save_volume_nifti(const Volume& vol, const std::string& path) {
  const auto hdr = make_header(vol.nx, vol.ny, vol.nz, vol.spacing, kDtFloat32);
  write_file(path, hdr, vol.data.data(), vol.data.size() * 4);
}

}  // namespace lungseg
