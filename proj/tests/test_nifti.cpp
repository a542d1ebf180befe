#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <random>
#include <vector>

#include "lungseg/nifti.hpp"

using namespace lungseg;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const char* name) {
  return fs::temp_directory_path() / (std::string("lungseg_nifti_") + name);
}

// Hand-assembled minimal header, independent of the library writer.
struct HandHeader {
  std::vector<char> bytes = std::vector<char>(352, 0);

  void set_i32(int off, std::int32_t v) { std::memcpy(bytes.data() + off, &v, 4); }
  void set_i16(int off, std::int16_t v) { std::memcpy(bytes.data() + off, &v, 2); }
  void set_f32(int off, float v) { std::memcpy(bytes.data() + off, &v, 4); }

  HandHeader(int nx, int ny, int nz, std::int16_t datatype, std::int16_t bitpix) {
    set_i32(0, 348);
    set_i16(40, 3);  // dim[0]
    set_i16(42, static_cast<std::int16_t>(nx));
    set_i16(44, static_cast<std::int16_t>(ny));
    set_i16(46, static_cast<std::int16_t>(nz));
    for (int d = 4; d < 8; ++d) set_i16(40 + 2 * d, 1);
    set_i16(70, datatype);
    set_i16(72, bitpix);
    set_f32(80, 1.0f);  // pixdim[1..3]
    set_f32(84, 1.0f);
    set_f32(88, 1.0f);
    set_f32(108, 352.0f);  // vox_offset
    bytes[344] = 'n';
    bytes[345] = '+';
    bytes[346] = '1';
  }
};

void write_bytes(const fs::path& path, const std::vector<char>& bytes) {
  FILE* f = std::fopen(path.string().c_str(), "wb");
  REQUIRE(f != nullptr);
  std::fwrite(bytes.data(), 1, bytes.size(), f);
  std::fclose(f);
}

}  // namespace

TEST_CASE("hand-built int16 file loads with correct dims") {
  HandHeader hdr(4, 4, 4, 4 /*int16*/, 16);
  std::vector<char> file = hdr.bytes;
  for (int i = 0; i < 64; ++i) {
    const std::int16_t v = static_cast<std::int16_t>(-550);
    file.insert(file.end(), reinterpret_cast<const char*>(&v),
                reinterpret_cast<const char*>(&v) + 2);
  }
  const auto path = temp_file("hand.nii");
  write_bytes(path, file);

  const Volume vol = load_nifti(path.string());
  CHECK(vol.nx == 4);
  CHECK(vol.ny == 4);
  CHECK(vol.nz == 4);
  CHECK(vol.data[17] == doctest::Approx(-550.0f));
  fs::remove(path);
}

TEST_CASE("scl_slope and scl_inter rescale raw values") {
  HandHeader hdr(1, 1, 1, 4, 16);
  hdr.set_f32(112, 1.0f);      // scl_slope
  hdr.set_f32(116, -1024.0f);  // scl_inter
  std::vector<char> file = hdr.bytes;
  const std::int16_t raw = 474;
  file.insert(file.end(), reinterpret_cast<const char*>(&raw),
              reinterpret_cast<const char*>(&raw) + 2);
  const auto path = temp_file("scl.nii");
  write_bytes(path, file);

  const Volume vol = load_nifti(path.string());
  CHECK(vol.data[0] == doctest::Approx(-550.0f));
  fs::remove(path);
}

TEST_CASE("mask save then load is an identity") {
  LabelMask mask(5, 4, 3);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> label(0, 1);
  for (auto& l : mask.labels) l = label(rng);

  const auto path = temp_file("mask.nii");
  save_mask_nifti(mask, path.string());
  const LabelMask back = load_mask_nifti(path.string());
  CHECK(back.nx == mask.nx);
  CHECK(back.labels == mask.labels);
  fs::remove(path);
}

TEST_CASE("volume save then load preserves float data and spacing") {
  Volume vol(3, 2, 2, 0.0f, {0.7, 0.7, 1.5});
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<float> hu(kHuMin, kHuMax);
  for (auto& v : vol.data) v = hu(rng);

  const auto path = temp_file("vol.nii");
  save_volume_nifti(vol, path.string());
  const Volume back = load_nifti(path.string());
  CHECK(back.data == vol.data);
  CHECK(back.spacing[0] == doctest::Approx(0.7));
  CHECK(back.spacing[2] == doctest::Approx(1.5));
  fs::remove(path);
}

TEST_CASE("format errors identify the offending field") {
  SUBCASE("bad magic") {
    HandHeader hdr(2, 2, 2, 4, 16);
    hdr.bytes[344] = 'x';
    const auto path = temp_file("badmagic.nii");
    write_bytes(path, hdr.bytes);
    try {
      load_nifti(path.string());
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(std::string(e.what()).find("magic") != std::string::npos);
    }
    fs::remove(path);
  }
  SUBCASE("unsupported datatype") {
    HandHeader hdr(2, 2, 2, 8 /*int32*/, 32);
    const auto path = temp_file("baddt.nii");
    write_bytes(path, hdr.bytes);
    try {
      load_nifti(path.string());
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(std::string(e.what()).find("datatype") != std::string::npos);
    }
    fs::remove(path);
  }
  SUBCASE("dim[0] != 3") {
    HandHeader hdr(2, 2, 2, 4, 16);
    hdr.set_i16(40, 4);
    const auto path = temp_file("baddim.nii");
    write_bytes(path, hdr.bytes);
    try {
      load_nifti(path.string());
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(std::string(e.what()).find("dim[0]") != std::string::npos);
    }
    fs::remove(path);
  }
  SUBCASE("gzip gets a pointed message") {
    std::vector<char> gz = {'\x1f', '\x8b', '\x08', '\x00'};
    gz.resize(400, 0);
    const auto path = temp_file("gz.nii");
    write_bytes(path, gz);
    try {
      load_nifti(path.string());
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(std::string(e.what()).find("gzip") != std::string::npos);
    }
    fs::remove(path);
  }
}

TEST_CASE("byte-swapped input is detected and loaded") {
  HandHeader hdr(2, 1, 1, 4, 16);
  std::vector<char> file = hdr.bytes;
  const std::int16_t vals[2] = {-550, 100};
  file.insert(file.end(), reinterpret_cast<const char*>(vals),
              reinterpret_cast<const char*>(vals) + 4);
  // Swap every multi-byte field the reader touches, plus the payload.
  auto swap2_at = [&](int off) { std::swap(file[off], file[off + 1]); };
  auto swap4_at = [&](int off) {
    std::swap(file[off], file[off + 3]);
    std::swap(file[off + 1], file[off + 2]);
  };
  swap4_at(0);
  for (int d = 0; d < 8; ++d) swap2_at(40 + 2 * d);
  swap2_at(70);
  swap2_at(72);
  for (int p = 0; p < 8; ++p) swap4_at(76 + 4 * p);
  swap4_at(108);
  swap4_at(112);
  swap4_at(116);
  swap2_at(352);
  swap2_at(354);

  const auto path = temp_file("swapped.nii");
  write_bytes(path, file);
  const Volume vol = load_nifti(path.string());
  CHECK(vol.nx == 2);
  CHECK(vol.data[0] == doctest::Approx(-550.0f));
  CHECK(vol.data[1] == doctest::Approx(100.0f));
  fs::remove(path);
}

TEST_CASE("labels that overflow int16 are rejected on save") {
  LabelMask mask(1, 1, 1);
  mask.labels[0] = 40000;
  CHECK_THROWS_AS(save_mask_nifti(mask, temp_file("overflow.nii").string()), ParamError);
}
