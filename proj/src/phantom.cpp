#include "lungseg/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace lungseg {

PathologyBlob PathologyBlob::consolidation(const Ellipsoid& shape) {
  return {shape, BlobKind::Consolidation, 40.0, 5.0};
}

PathologyBlob PathologyBlob::ggo(const Ellipsoid& shape) {
  return {shape, BlobKind::GGO, -300.0, 60.0};
}

PhantomSpec default_phantom(std::uint64_t seed, bool with_consolidation, bool with_ggo) {
  PhantomSpec spec;
  spec.rng_seed = seed;

  // Deterministic per-seed jitter keeps the 20-case suites distinct while the
  // blobs stay well inside the lungs.
  std::mt19937_64 jitter_rng(seed * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL);
  std::uniform_int_distribution<int> jitter(-2, 2);

  if (with_consolidation) {
    Ellipsoid shape{28.0 + jitter(jitter_rng), 48.0 + jitter(jitter_rng),
                    32.0 + jitter(jitter_rng), 6, 6, 6};
    spec.blobs.push_back(PathologyBlob::consolidation(shape));
  }
  if (with_ggo) {
    Ellipsoid shape{65.0 + jitter(jitter_rng), 50.0 + jitter(jitter_rng),
                    34.0 + jitter(jitter_rng), 7, 7, 7};
    spec.blobs.push_back(PathologyBlob::ggo(shape));
  }
  return spec;
}

PhantomCase generate_phantom(const PhantomSpec& spec) {
  Volume vol(spec.nx, spec.ny, spec.nz, 0.0f, spec.spacing);
  LabelMask truth(spec.nx, spec.ny, spec.nz);

  const double bcx = spec.nx / 2.0, bcy = spec.ny / 2.0;
  const double inner_rx = spec.ring_outer_rx - spec.ring_thickness;
  const double inner_ry = spec.ring_outer_ry - spec.ring_thickness;

  std::mt19937_64 rng(spec.rng_seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  for (int z = 0; z < spec.nz; ++z)
    for (int y = 0; y < spec.ny; ++y)
      for (int x = 0; x < spec.nx; ++x) {
        const double ex = (x - bcx) / spec.body_rx, ey = (y - bcy) / spec.body_ry;
        const double body_r2 = ex * ex + ey * ey;
        const double rox = (x - bcx) / spec.ring_outer_rx, roy = (y - bcy) / spec.ring_outer_ry;
        const double rix = (x - bcx) / inner_rx, riy = (y - bcy) / inner_ry;

        const bool in_body = body_r2 <= 1.0;
        const bool in_ring = in_body && (rox * rox + roy * roy <= 1.0) && (rix * rix + riy * riy > 1.0);
        const bool in_left = spec.lung_left.contains(x, y, z);
        const bool in_right = spec.lung_right.contains(x, y, z);
        const bool in_lung = in_left || in_right;

        const PathologyBlob* blob = nullptr;
        for (const auto& b : spec.blobs)
          if (b.shape.contains(x, y, z)) {
            blob = &b;
            break;
          }
        if (blob && !in_lung)
          throw ParamError("phantom blob voxel (" + std::to_string(x) + "," + std::to_string(y) +
                           "," + std::to_string(z) + ") lies outside both lungs");
        if (in_lung && in_ring)
          throw ParamError("phantom lung voxel (" + std::to_string(x) + "," + std::to_string(y) +
                           "," + std::to_string(z) + ") collides with the rib ring");

        double mean, sigma;
        if (blob) {
          mean = blob->mean_hu;
          sigma = blob->noise_sigma;
        } else if (in_lung) {
          mean = spec.lung_hu;
          sigma = spec.lung_noise;
        } else if (in_ring) {
          mean = spec.ring_hu;
          sigma = spec.ring_noise;
        } else if (in_body) {
          mean = spec.body_hu;
          sigma = spec.body_noise;
        } else {
          mean = spec.air_hu;
          sigma = spec.air_noise;
        }

        const double v = mean + sigma * gauss(rng);
        vol.at(x, y, z) =
            static_cast<float>(std::min<double>(kHuMax, std::max<double>(kHuMin, v)));
        truth.at(x, y, z) = in_lung ? 1 : 0;
      }

  return {std::move(vol), std::move(truth)};
}

// ------------------------------------------------------------------
// Spec files: `key = value...` lines, '#' comments.
// ------------------------------------------------------------------

PhantomSpec load_phantom_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open phantom spec: " + path);

  PhantomSpec spec;
  spec.blobs.clear();
  std::string line;
  std::size_t line_no = 0;

  auto bad = [&](const std::string& why) -> void {
    throw FormatError("phantom spec " + path + " line " + std::to_string(line_no) + ": " + why);
  };

  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos) bad("expected key = value");
      continue;
    }
    std::istringstream key_in(line.substr(0, eq));
    std::istringstream val(line.substr(eq + 1));
    std::string key;
    key_in >> key;

    auto read_ellipsoid = [&]() {
      Ellipsoid e;
      if (!(val >> e.cx >> e.cy >> e.cz >> e.rx >> e.ry >> e.rz))
        bad("expected 6 numbers (cx cy cz rx ry rz)");
      return e;
    };

    if (key == "dims") {
      if (!(val >> spec.nx >> spec.ny >> spec.nz)) bad("expected 3 integers");
    } else if (key == "spacing") {
      if (!(val >> spec.spacing[0] >> spec.spacing[1] >> spec.spacing[2])) bad("expected 3 numbers");
    } else if (key == "rng_seed") {
      if (!(val >> spec.rng_seed)) bad("expected integer");
    } else if (key == "air_hu") {
      if (!(val >> spec.air_hu)) bad("expected number");
    } else if (key == "air_noise") {
      if (!(val >> spec.air_noise)) bad("expected number");
    } else if (key == "body_hu") {
      if (!(val >> spec.body_hu)) bad("expected number");
    } else if (key == "body_noise") {
      if (!(val >> spec.body_noise)) bad("expected number");
    } else if (key == "body_radii") {
      if (!(val >> spec.body_rx >> spec.body_ry)) bad("expected 2 numbers");
    } else if (key == "ring_radii") {
      if (!(val >> spec.ring_outer_rx >> spec.ring_outer_ry)) bad("expected 2 numbers");
    } else if (key == "ring_thickness") {
      if (!(val >> spec.ring_thickness)) bad("expected number");
    } else if (key == "ring_hu") {
      if (!(val >> spec.ring_hu)) bad("expected number");
    } else if (key == "ring_noise") {
      if (!(val >> spec.ring_noise)) bad("expected number");
    } else if (key == "lung_hu") {
      if (!(val >> spec.lung_hu)) bad("expected number");
    } else if (key == "lung_noise") {
      if (!(val >> spec.lung_noise)) bad("expected number");
    } else if (key == "lung_left") {
      spec.lung_left = read_ellipsoid();
    } else if (key == "lung_right") {
      spec.lung_right = read_ellipsoid();
    } else if (key == "blob") {
      std::string kind;
      val >> kind;
      const Ellipsoid shape = read_ellipsoid();
      if (kind == "consolidation")
        spec.blobs.push_back(PathologyBlob::consolidation(shape));
      else if (kind == "ggo")
        spec.blobs.push_back(PathologyBlob::ggo(shape));
      else
        bad("unknown blob kind '" + kind + "' (consolidation or ggo)");
    } else {
      bad("unknown key '" + key + "'");
    }
  }
  return spec;
}

}  // namespace lungseg
