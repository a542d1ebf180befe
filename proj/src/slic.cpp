#include "lungseg/slic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace lungseg {

namespace {

constexpr int kNbr[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};

int clamp_int(int v, int lo, int hi) { return std::max(lo, std::min(hi, v)); }

}  // namespace

std::vector<ClusterCenter> init_centers(const Volume& vol, const LabelMask& region, int k,
                                        int* grid_interval_out) {
  if (!region.same_dims(vol)) throw ParamError("init_centers: region/volume dimension mismatch");
  if (k < 1) throw ParamError("init_centers: k must be >= 1");
  const long n_vox = region.count_nonzero();
  if (n_vox == 0) throw ParamError("init_centers: region is empty");
  if (k > n_vox)
    throw ParamError("init_centers: k=" + std::to_string(k) + " exceeds region voxel count " +
                     std::to_string(n_vox));

  const int S = std::max<int>(
      1, static_cast<int>(std::llround(std::cbrt(static_cast<double>(n_vox) / k))));
  if (grid_interval_out) *grid_interval_out = S;

  // Grid points sit at the centroids of S^3 blocks: offset (S-1)/2, step S.
  const double off = (S - 1) / 2.0;
  const int snap_r = (S + 1) / 2;
  const double snap_max2 = (S / 2.0) * (S / 2.0);

  std::vector<ClusterCenter> centers;
  for (double gz = off; gz < vol.nz; gz += S)
    for (double gy = off; gy < vol.ny; gy += S)
      for (double gx = off; gx < vol.nx; gx += S) {
        const int ix = clamp_int(static_cast<int>(std::llround(gx)), 0, vol.nx - 1);
        const int iy = clamp_int(static_cast<int>(std::llround(gy)), 0, vol.ny - 1);
        const int iz = clamp_int(static_cast<int>(std::llround(gz)), 0, vol.nz - 1);
        if (region.at(ix, iy, iz) != 0) {
          centers.push_back({static_cast<double>(vol.at(ix, iy, iz)), gx, gy, gz});
          continue;
        }
        // Snap to the nearest in-region voxel within S/2, else drop.
        double best = snap_max2 + 1e-9;
        Vec3i best_voxel{-1, -1, -1};
        for (int z = clamp_int(iz - snap_r, 0, vol.nz - 1);
             z <= clamp_int(iz + snap_r, 0, vol.nz - 1); ++z)
          for (int y = clamp_int(iy - snap_r, 0, vol.ny - 1);
               y <= clamp_int(iy + snap_r, 0, vol.ny - 1); ++y)
            for (int x = clamp_int(ix - snap_r, 0, vol.nx - 1);
                 x <= clamp_int(ix + snap_r, 0, vol.nx - 1); ++x) {
              if (region.at(x, y, z) == 0) continue;
              const double d2 = (x - gx) * (x - gx) + (y - gy) * (y - gy) + (z - gz) * (z - gz);
              if (d2 < best) {
                best = d2;
                best_voxel = {x, y, z};
              }
            }
        if (best_voxel.x >= 0)
          centers.push_back({static_cast<double>(vol.at(best_voxel.x, best_voxel.y, best_voxel.z)),
                             static_cast<double>(best_voxel.x), static_cast<double>(best_voxel.y),
                             static_cast<double>(best_voxel.z)});
      }

  if (centers.empty()) {
    // Region too sparse for the grid: fall back to the voxel nearest the
    // region centroid so at least one cluster exists.
    double cx = 0, cy = 0, cz = 0;
    for (int z = 0; z < vol.nz; ++z)
      for (int y = 0; y < vol.ny; ++y)
        for (int x = 0; x < vol.nx; ++x)
          if (region.at(x, y, z) != 0) {
            cx += x;
            cy += y;
            cz += z;
          }
    cx /= n_vox;
    cy /= n_vox;
    cz /= n_vox;
    double best = std::numeric_limits<double>::max();
    Vec3i bv{};
    for (int z = 0; z < vol.nz; ++z)
      for (int y = 0; y < vol.ny; ++y)
        for (int x = 0; x < vol.nx; ++x) {
          if (region.at(x, y, z) == 0) continue;
          const double d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy) + (z - cz) * (z - cz);
          if (d2 < best) {
            best = d2;
            bv = {x, y, z};
          }
        }
    centers.push_back({static_cast<double>(vol.at(bv.x, bv.y, bv.z)), static_cast<double>(bv.x),
                       static_cast<double>(bv.y), static_cast<double>(bv.z)});
  }
  return centers;
}

namespace {

struct IterStats {
  double residual = 0.0;
  double mean_distance = 0.0;
  long uncovered = 0;
};

// In-region voxels of each (z, y) row as closed [x_begin, x_end] spans, so the
// hot loops skip out-of-region voxels without testing the mask.
struct RegionRows {
  std::vector<std::size_t> offsets;        // row -> index into spans
  std::vector<std::pair<int, int>> spans;  // closed x intervals
  bool built = false;

  void build(const LabelMask& region) {
    offsets.assign(static_cast<std::size_t>(region.ny) * region.nz + 1, 0);
    spans.clear();
    for (int z = 0; z < region.nz; ++z)
      for (int y = 0; y < region.ny; ++y) {
        std::size_t i = region.index(0, y, z);
        int start = -1;
        for (int x = 0; x < region.nx; ++x, ++i) {
          if (region.labels[i] != 0) {
            if (start < 0) start = x;
          } else if (start >= 0) {
            spans.push_back({start, x - 1});
            start = -1;
          }
        }
        if (start >= 0) spans.push_back({start, region.nx - 1});
        offsets[static_cast<std::size_t>(z) * region.ny + y + 1] = spans.size();
      }
    built = true;
  }
};

struct SlicWorkspace {
  std::vector<double> best_d2;
  std::vector<std::int32_t> best_id;
  std::vector<double> col_term;  // per-center x-column spatial penalties
  RegionRows rows;
};

// One assignment + update sweep over reusable buffers. Ties break toward the
// lowest cluster id (center-major pass with strict improvement).
IterStats iterate_once(const Volume& vol, const LabelMask& region,
                       std::vector<ClusterCenter>& centers, double compactness, int S,
                       SlicWorkspace& ws) {
  const double w2 = (compactness / S) * (compactness / S);
  const std::size_t n = vol.size();
  if (!ws.rows.built) ws.rows.build(region);

  auto for_each_span = [&](auto&& fn) {
    for (int z = 0; z < vol.nz; ++z)
      for (int y = 0; y < vol.ny; ++y) {
        const std::size_t row = static_cast<std::size_t>(z) * vol.ny + y;
        for (std::size_t s = ws.rows.offsets[row]; s < ws.rows.offsets[row + 1]; ++s)
          fn(ws.rows.spans[s].first, ws.rows.spans[s].second, y, z);
      }
  };

  if (ws.best_id.size() != n) {  // first iteration: out-of-region stays kNone
    ws.best_d2.assign(n, std::numeric_limits<double>::max());
    ws.best_id.assign(n, SupervoxelMap::kNone);
  } else {
    for_each_span([&](int xa, int xb, int y, int z) {
      std::size_t i = vol.index(xa, y, z);
      for (int x = xa; x <= xb; ++x, ++i) {
        ws.best_d2[i] = std::numeric_limits<double>::max();
        ws.best_id[i] = SupervoxelMap::kNone;
      }
    });
  }

  for (std::size_t ci = 0; ci < centers.size(); ++ci) {
    const ClusterCenter& c = centers[ci];
    // Half-open [c - S, c + S) search box: a 2S-voxel span per axis.
    const int x0 = clamp_int(static_cast<int>(std::ceil(c.x - S)), 0, vol.nx - 1);
    const int x1 = clamp_int(static_cast<int>(std::ceil(c.x + S)) - 1, 0, vol.nx - 1);
    const int y0 = clamp_int(static_cast<int>(std::ceil(c.y - S)), 0, vol.ny - 1);
    const int y1 = clamp_int(static_cast<int>(std::ceil(c.y + S)) - 1, 0, vol.ny - 1);
    const int z0 = clamp_int(static_cast<int>(std::ceil(c.z - S)), 0, vol.nz - 1);
    const int z1 = clamp_int(static_cast<int>(std::ceil(c.z + S)) - 1, 0, vol.nz - 1);

    ws.col_term.resize(x1 - x0 + 1);
    for (int x = x0; x <= x1; ++x) ws.col_term[x - x0] = w2 * (x - c.x) * (x - c.x);

    for (int z = z0; z <= z1; ++z) {
      const double dz2 = w2 * (z - c.z) * (z - c.z);
      for (int y = y0; y <= y1; ++y) {
        const double row_term = dz2 + w2 * (y - c.y) * (y - c.y);
        const std::size_t row = static_cast<std::size_t>(z) * vol.ny + y;
        for (std::size_t s = ws.rows.offsets[row]; s < ws.rows.offsets[row + 1]; ++s) {
          const int xa = std::max(x0, ws.rows.spans[s].first);
          const int xb = std::min(x1, ws.rows.spans[s].second);
          const std::size_t base = vol.index(xa, y, z);
          const float* __restrict v = vol.data.data() + base;
          const double* __restrict col = ws.col_term.data() + (xa - x0);
          double* __restrict bd = ws.best_d2.data() + base;
          std::int32_t* __restrict bi = ws.best_id.data() + base;
          const double cv = c.v;
          const auto id = static_cast<std::int32_t>(ci);
          const int len = xb - xa + 1;
          for (int t = 0; t < len; ++t) {  // branchless select keeps the pipe full
            const double dv = v[t] - cv;
            const double d2 = dv * dv + col[t] + row_term;
            const std::int32_t take = -static_cast<std::int32_t>(d2 < bd[t]);
            bd[t] = std::min(bd[t], d2);
            bi[t] = (bi[t] & ~take) | (id & take);
          }
        }
      }
    }
  }

  // Voxels covered by no window: nearest center unconditionally.
  IterStats stats;
  for_each_span([&](int xa, int xb, int y, int z) {
    std::size_t i = vol.index(xa, y, z);
    for (int x = xa; x <= xb; ++x, ++i) {
      if (ws.best_id[i] != SupervoxelMap::kNone) continue;
      ++stats.uncovered;
      for (std::size_t ci = 0; ci < centers.size(); ++ci) {
        const ClusterCenter& c = centers[ci];
        const double dv = vol.data[i] - c.v;
        const double ds2 = (x - c.x) * (x - c.x) + (y - c.y) * (y - c.y) + (z - c.z) * (z - c.z);
        const double d2 = dv * dv + w2 * ds2;
        if (d2 < ws.best_d2[i]) {
          ws.best_d2[i] = d2;
          ws.best_id[i] = static_cast<std::int32_t>(ci);
        }
      }
    }
  });

  // Update step: move centers to the member mean of [v, x, y, z].
  std::vector<double> sv(centers.size(), 0.0), sx(centers.size(), 0.0), sy(centers.size(), 0.0),
      sz(centers.size(), 0.0);
  std::vector<long> cnt(centers.size(), 0);
  double dist_sum = 0.0;
  long in_region = 0;
  for_each_span([&](int xa, int xb, int y, int z) {
    std::size_t i = vol.index(xa, y, z);
    for (int x = xa; x <= xb; ++x, ++i) {
      const std::int32_t id = ws.best_id[i];
      sv[id] += vol.data[i];
      sx[id] += x;
      sy[id] += y;
      sz[id] += z;
      ++cnt[id];
      dist_sum += std::sqrt(ws.best_d2[i]);
      ++in_region;
    }
  });

  double residual2 = 0.0;
  for (std::size_t ci = 0; ci < centers.size(); ++ci) {
    if (cnt[ci] == 0) continue;  // empty clusters keep their position
    const ClusterCenter next{sv[ci] / cnt[ci], sx[ci] / cnt[ci], sy[ci] / cnt[ci],
                             sz[ci] / cnt[ci]};
    const double dv = next.v - centers[ci].v;
    const double dx = next.x - centers[ci].x;
    const double dy = next.y - centers[ci].y;
    const double dz = next.z - centers[ci].z;
    residual2 += dv * dv + dx * dx + dy * dy + dz * dz;
    centers[ci] = next;
  }
  stats.residual = std::sqrt(residual2);
  stats.mean_distance = in_region > 0 ? dist_sum / in_region : 0.0;
  return stats;
}

}  // namespace

AssignResult assign_and_update(const Volume& vol, const LabelMask& region,
                               std::vector<ClusterCenter>& centers, double compactness, int S) {
  if (!region.same_dims(vol))
    throw ParamError("assign_and_update: region/volume dimension mismatch");
  if (centers.empty()) throw ParamError("assign_and_update: no cluster centers");
  if (S < 1) throw ParamError("assign_and_update: grid interval must be >= 1");

  SlicWorkspace ws;
  const IterStats stats = iterate_once(vol, region, centers, compactness, S, ws);

  AssignResult res;
  res.residual = stats.residual;
  res.map.nx = vol.nx;
  res.map.ny = vol.ny;
  res.map.nz = vol.nz;
  res.map.assignment = std::move(ws.best_id);
  res.map.centers = centers;
  res.map.grid_interval = S;
  res.map.diag.uncovered = stats.uncovered;
  res.map.diag.residuals.push_back(stats.residual);
  res.map.diag.mean_distances.push_back(stats.mean_distance);
  return res;
}

namespace {

// Signed neighbor steps in linear index space plus a per-voxel validity
// bitmask, so flood fills avoid integer division per voxel.
struct NeighborTable {
  std::ptrdiff_t step[6];
  std::vector<std::uint8_t> valid;  // bit d set: neighbor d stays in bounds

  NeighborTable(int nx, int ny, int nz) {
    const std::ptrdiff_t sx = 1, sy = nx, sz = static_cast<std::ptrdiff_t>(nx) * ny;
    const std::ptrdiff_t s[6] = {sx, -sx, sy, -sy, sz, -sz};
    std::copy(s, s + 6, step);
    valid.assign(static_cast<std::size_t>(nx) * ny * nz, 0);
    std::size_t i = 0;
    for (int z = 0; z < nz; ++z)
      for (int y = 0; y < ny; ++y)
        for (int x = 0; x < nx; ++x, ++i) {
          std::uint8_t m = 0;
          if (x + 1 < nx) m |= 1u << 0;
          if (x > 0) m |= 1u << 1;
          if (y + 1 < ny) m |= 1u << 2;
          if (y > 0) m |= 1u << 3;
          if (z + 1 < nz) m |= 1u << 4;
          if (z > 0) m |= 1u << 5;
          valid[i] = m;
        }
  }
};

// Flat component labeling of the assignment grid: comp_of per voxel plus
// CSR-style voxel lists (no per-component allocations).
struct ComponentSet {
  std::vector<int> comp_of;           // per voxel, -1 outside the region
  std::vector<std::int32_t> comp_id;  // supervoxel id per component
  std::vector<std::size_t> offsets;   // comp c owns voxels[offsets[c]..offsets[c+1])
  std::vector<std::size_t> voxels;    // linear voxel indices grouped by component

  int count() const { return static_cast<int>(comp_id.size()); }
  long size_of(int c) const { return static_cast<long>(offsets[c + 1] - offsets[c]); }
};

// Two-pass raster union-find: streaming access instead of flood fill.
// Component indices follow the scan order of their first voxel.
ComponentSet find_components(const SupervoxelMap& map) {
  const std::size_t n = map.assignment.size();
  const int nx = map.nx, ny = map.ny, nz = map.nz;
  const std::size_t plane = static_cast<std::size_t>(nx) * ny;
  const std::int32_t* a = map.assignment.data();

  std::vector<std::int32_t> parent(n);
  auto find = [&](std::int32_t v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  auto unite = [&](std::int32_t u, std::int32_t v) {
    u = find(u);
    v = find(v);
    if (u == v) return;
    if (u < v)
      parent[v] = u;  // keep the smaller index as root
    else
      parent[u] = v;
  };

  std::size_t i = 0;
  for (int z = 0; z < nz; ++z)
    for (int y = 0; y < ny; ++y)
      for (int x = 0; x < nx; ++x, ++i) {
        if (a[i] == SupervoxelMap::kNone) continue;
        parent[i] = static_cast<std::int32_t>(i);
        if (x > 0 && a[i - 1] == a[i]) unite(static_cast<std::int32_t>(i), static_cast<std::int32_t>(i - 1));
        if (y > 0 && a[i - nx] == a[i]) unite(static_cast<std::int32_t>(i), static_cast<std::int32_t>(i - nx));
        if (z > 0 && a[i - plane] == a[i]) unite(static_cast<std::int32_t>(i), static_cast<std::int32_t>(i - plane));
      }

  ComponentSet cs;
  cs.comp_of.assign(n, -1);
  std::vector<std::int32_t> comp_of_root(n, -1);
  std::vector<std::size_t> sizes;
  for (i = 0; i < n; ++i) {
    if (a[i] == SupervoxelMap::kNone) continue;
    const std::int32_t r = find(static_cast<std::int32_t>(i));
    if (comp_of_root[r] == -1) {
      comp_of_root[r] = cs.count();
      cs.comp_id.push_back(a[i]);
      sizes.push_back(0);
    }
    const int c = comp_of_root[r];
    cs.comp_of[i] = c;
    ++sizes[c];
  }

  cs.offsets.resize(cs.count() + 1);
  cs.offsets[0] = 0;
  for (int c = 0; c < cs.count(); ++c) cs.offsets[c + 1] = cs.offsets[c] + sizes[c];
  cs.voxels.resize(cs.offsets.back());
  std::vector<std::size_t> cursor(cs.offsets.begin(), cs.offsets.end() - 1);
  for (i = 0; i < n; ++i)
    if (cs.comp_of[i] != -1) cs.voxels[cursor[cs.comp_of[i]]++] = i;
  return cs;
}

// Relabel disconnected fragments of each supervoxel to the dominant
// neighboring supervoxel (largest face contact, ties to the lowest id).
// A relabeled fragment fuses with an adjacent component, so the total
// component count strictly decreases and the sweep converges; only fragments
// with no in-region neighbor at all (isolated islands of the region itself)
// receive fresh ids. Afterwards ids are compacted and centers recomputed.
void enforce_connectivity(const Volume& vol, SupervoxelMap& map) {
  const int nx = map.nx, ny = map.ny, nz = map.nz;
  const NeighborTable nbr(nx, ny, nz);
  ComponentSet cs;
  std::vector<long> contact(map.centers.size(), 0);
  std::vector<std::int32_t> touched;
  std::vector<int> keeper_of_id(map.centers.size());

  for (;;) {
    cs = find_components(map);
    if (cs.count() == 0) {
      map.centers.clear();
      map.k_actual = 0;
      return;
    }

    // Largest component of each id keeps it (ties: first in scan order).
    std::fill(keeper_of_id.begin(), keeper_of_id.end(), -1);
    for (int c = 0; c < cs.count(); ++c) {
      const std::int32_t id = cs.comp_id[c];
      if (keeper_of_id[id] == -1 || cs.size_of(c) > cs.size_of(keeper_of_id[id]))
        keeper_of_id[id] = c;
    }

    bool changed = false;
    for (int c = 0; c < cs.count(); ++c) {
      if (keeper_of_id[cs.comp_id[c]] == c) continue;
      // Dominant neighboring supervoxel by live face-contact count.
      touched.clear();
      for (std::size_t vi = cs.offsets[c]; vi < cs.offsets[c + 1]; ++vi) {
        const std::size_t i = cs.voxels[vi];
        const std::uint8_t m = nbr.valid[i];
        for (int d = 0; d < 6; ++d) {
          if (!(m & (1u << d))) continue;
          const std::int32_t other = map.assignment[i + nbr.step[d]];
          if (other == SupervoxelMap::kNone || other == cs.comp_id[c]) continue;
          if (contact[other] == 0) touched.push_back(other);
          ++contact[other];
        }
      }
      std::int32_t best = -1;
      long best_contact = 0;
      for (std::int32_t id : touched) {
        if (contact[id] > best_contact || (contact[id] == best_contact && id < best)) {
          best = id;
          best_contact = contact[id];
        }
        contact[id] = 0;
      }
      if (best < 0) continue;  // isolated island, handled after the sweep
      for (std::size_t vi = cs.offsets[c]; vi < cs.offsets[c + 1]; ++vi)
        map.assignment[cs.voxels[vi]] = best;
      changed = true;
    }
    if (!changed) break;
  }

  // Compact ids: survivors in ascending order. Any id still split carries
  // isolated islands; the largest component keeps the id, extras get fresh ids.
  std::vector<int> keeper(map.centers.size(), -1);
  for (int c = 0; c < cs.count(); ++c) {
    const std::int32_t id = cs.comp_id[c];
    if (keeper[id] == -1 || cs.size_of(c) > cs.size_of(keeper[id])) keeper[id] = c;
  }
  std::vector<std::int32_t> old_to_new(map.centers.size(), -1);
  std::int32_t next_id = 0;
  for (std::size_t id = 0; id < keeper.size(); ++id)
    if (keeper[id] >= 0) old_to_new[id] = next_id++;

  for (int c = 0; c < cs.count(); ++c) {
    const std::int32_t target =
        (keeper[cs.comp_id[c]] == c) ? old_to_new[cs.comp_id[c]] : next_id++;
    for (std::size_t vi = cs.offsets[c]; vi < cs.offsets[c + 1]; ++vi)
      map.assignment[cs.voxels[vi]] = target;
  }

  // Recompute centers over the final membership.
  map.k_actual = next_id;
  std::vector<double> svv(next_id, 0.0), sxx(next_id, 0.0), syy(next_id, 0.0), szz(next_id, 0.0);
  std::vector<long> cnt(next_id, 0);
  for (int z = 0; z < nz; ++z)
    for (int y = 0; y < ny; ++y) {
      std::size_t i = map.index(0, y, z);
      for (int x = 0; x < nx; ++x, ++i) {
        const std::int32_t id = map.assignment[i];
        if (id == SupervoxelMap::kNone) continue;
        svv[id] += vol.data[i];
        sxx[id] += x;
        syy[id] += y;
        szz[id] += z;
        ++cnt[id];
      }
    }
  map.centers.resize(next_id);
  for (int id = 0; id < next_id; ++id)
    map.centers[id] = {svv[id] / cnt[id], sxx[id] / cnt[id], syy[id] / cnt[id], szz[id] / cnt[id]};
}

}  // namespace

SupervoxelMap run_slic(const Volume& vol, const LabelMask& region, const SlicParams& params) {
  if (params.max_iters < 1) throw ParamError("run_slic: max_iters must be >= 1");
  if (!(params.tol >= 0.0)) throw ParamError("run_slic: tol must be >= 0");

  int S = 1;
  std::vector<ClusterCenter> centers = init_centers(vol, region, params.k, &S);

  SlicWorkspace ws;
  SlicDiagnostics diag;
  for (int it = 0; it < params.max_iters; ++it) {
    const IterStats stats = iterate_once(vol, region, centers, params.compactness, S, ws);
    diag.residuals.push_back(stats.residual);
    diag.mean_distances.push_back(stats.mean_distance);
    diag.uncovered = stats.uncovered;
    if (stats.residual < params.tol) break;
  }

  SupervoxelMap map;
  map.nx = vol.nx;
  map.ny = vol.ny;
  map.nz = vol.nz;
  map.assignment = std::move(ws.best_id);
  map.centers = std::move(centers);
  map.grid_interval = S;
  map.k_requested = params.k;
  map.diag = std::move(diag);
  enforce_connectivity(vol, map);
  return map;
}

std::vector<std::pair<int, Vec3i>> centroids(const SupervoxelMap& map) {
  std::vector<double> best(map.centers.size(), std::numeric_limits<double>::max());
  std::vector<Vec3i> voxel(map.centers.size());
  for (int z = 0; z < map.nz; ++z)
    for (int y = 0; y < map.ny; ++y) {
      std::size_t i = map.index(0, y, z);
      for (int x = 0; x < map.nx; ++x, ++i) {
        const std::int32_t id = map.assignment[i];
        if (id == SupervoxelMap::kNone) continue;
        const ClusterCenter& c = map.centers[id];
        const double d2 = (x - c.x) * (x - c.x) + (y - c.y) * (y - c.y) + (z - c.z) * (z - c.z);
        if (d2 < best[id]) {
          best[id] = d2;
          voxel[id] = {x, y, z};
        }
      }
    }
  std::vector<std::pair<int, Vec3i>> out;
  out.reserve(map.centers.size());
  for (std::size_t id = 0; id < map.centers.size(); ++id)
    if (best[id] < std::numeric_limits<double>::max())
      out.push_back({static_cast<int>(id), voxel[id]});
  return out;
}

}  // namespace lungseg
