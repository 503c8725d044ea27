// SPDX-License-Identifier: Apache-2.0
#include "flairseg/components.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <array>
#include <limits>

namespace flairseg {

namespace {

struct Offset {
  int dx, dy, dz;
};

// Backward neighbors: offsets lexicographically before (0,0,0) in z,y,x scan
// order, restricted to the connectivity's Chebyshev/Manhattan shell.
std::vector<Offset> backward_offsets(Connectivity c) {
  const int max_manhattan = c == Connectivity::c6 ? 1
                            : c == Connectivity::c18 ? 2
                                                     : 3;
  std::vector<Offset> out;
  for (int dz = -1; dz <= 0; ++dz)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        const bool backward =
            dz < 0 || (dz == 0 && (dy < 0 || (dy == 0 && dx < 0)));
        if (!backward) continue;
        if (std::abs(dx) + std::abs(dy) + std::abs(dz) > max_manhattan)
          continue;
        out.push_back({dx, dy, dz});
      }
  return out;
}

class UnionFind {
public:
  explicit UnionFind(std::uint32_t n = 0) : parent_(n + 1) {
    for (std::uint32_t i = 0; i <= n; ++i) parent_[i] = i;
  }

  std::uint32_t make() {
    parent_.push_back(static_cast<std::uint32_t>(parent_.size()));
    return static_cast<std::uint32_t>(parent_.size() - 1);
  }

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];  // path halving
      x = parent_[x];
    }
    return x;
  }

  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent_[b] = a;
  }

  std::uint32_t size() const {
    return static_cast<std::uint32_t>(parent_.size() - 1);
  }

private:
  std::vector<std::uint32_t> parent_;
};

// First labeling pass over slices [z0, z1): provisional 1-based labels local
// to the chunk; neighbors reaching below z0 are left for the merge phase.
std::uint32_t label_chunk(const BinaryMask& m, std::span<const Offset> offs,
                          int z0, int z1, std::uint32_t* labels,
                          UnionFind& uf) {
  const int nx = m.dims.nx, ny = m.dims.ny;
  const std::size_t slice = static_cast<std::size_t>(nx) * ny;
  std::uint32_t created = 0;

  for (int z = z0; z < z1; ++z) {
    for (int y = 0; y < ny; ++y) {
      std::size_t i = slice * z + static_cast<std::size_t>(y) * nx;
      for (int x = 0; x < nx; ++x, ++i) {
        if (!m.bits[i]) continue;
        std::uint32_t adopted = 0;
        for (const Offset& o : offs) {
          const int xx = x + o.dx, yy = y + o.dy, zz = z + o.dz;
          if (zz < z0 || yy < 0 || yy >= ny || xx < 0 || xx >= nx) continue;
          const std::size_t j = slice * zz + static_cast<std::size_t>(yy) * nx + xx;
          const std::uint32_t lj = labels[j];
          if (!lj) continue;
          if (!adopted) {
            adopted = lj;
          } else {
            uf.unite(adopted, lj);
          }
        }
        if (!adopted) {
          adopted = uf.make();
          ++created;
        }
        labels[i] = adopted;
      }
    }
  }
  return created;
}

}  // namespace

Connectivity connectivity_from_int(int k) {
  switch (k) {
    case 6: return Connectivity::c6;
    case 18: return Connectivity::c18;
    case 26: return Connectivity::c26;
    default:
      fail(errc::bad_spec, "connectivity must be 6, 18 or 26, got " +
                               std::to_string(k));
  }
}

LabelMap label_components(const BinaryMask& m, Connectivity c) {
  const std::size_t n = m.bits.size();
  if (n >= std::numeric_limits<std::uint32_t>::max())
    fail(errc::bad_spec, "volume too large for 32-bit labels");

  LabelMap out;
  out.dims = m.dims;
  out.labels.assign(n, 0);
  if (n == 0) return out;

  const std::vector<Offset> offs = backward_offsets(c);
  const int nz = m.dims.nz;

  int nchunks = 1;
#ifdef _OPENMP
  nchunks = std::clamp(omp_get_max_threads(), 1, nz);
#endif

  std::vector<int> starts(nchunks + 1);
  for (int k = 0; k <= nchunks; ++k)
    starts[k] = static_cast<int>(static_cast<long long>(nz) * k / nchunks);

  std::vector<UnionFind> local(nchunks);
  std::vector<std::uint32_t> created(nchunks, 0);
#pragma omp parallel for schedule(static, 1)
  for (int k = 0; k < nchunks; ++k)
    created[k] = label_chunk(m, offs, starts[k], starts[k + 1],
                             out.labels.data(), local[k]);

  std::vector<std::uint32_t> offset(nchunks, 0);
  std::uint32_t total = 0;
  for (int k = 0; k < nchunks; ++k) {
    offset[k] = total;
    total += created[k];
  }

  // Fold chunk-local union-find forests into one global forest, then shift
  // the provisional voxel labels by each chunk's offset.
  UnionFind uf(total);
  for (int k = 0; k < nchunks; ++k)
    for (std::uint32_t l = 1; l <= local[k].size(); ++l)
      uf.unite(local[k].find(l) + offset[k], l + offset[k]);

  const int nx = m.dims.nx, ny = m.dims.ny;
  const std::size_t slice = static_cast<std::size_t>(nx) * ny;
#pragma omp parallel for schedule(static, 1)
  for (int k = 0; k < nchunks; ++k) {
    if (offset[k] == 0) continue;
    const std::size_t b = slice * starts[k], e = slice * starts[k + 1];
    for (std::size_t i = b; i < e; ++i)
      if (out.labels[i]) out.labels[i] += offset[k];
  }

  // Stitch chunk interfaces: only dz = -1 offsets cross a chunk boundary.
  for (int k = 1; k < nchunks; ++k) {
    const int z = starts[k];
    if (z == starts[k + 1]) continue;
    for (int y = 0; y < ny; ++y) {
      std::size_t i = slice * z + static_cast<std::size_t>(y) * nx;
      for (int x = 0; x < nx; ++x, ++i) {
        if (!out.labels[i]) continue;
        for (const Offset& o : offs) {
          if (o.dz != -1) continue;
          const int xx = x + o.dx, yy = y + o.dy;
          if (yy < 0 || yy >= ny || xx < 0 || xx >= nx) continue;
          const std::size_t j =
              slice * (z - 1) + static_cast<std::size_t>(yy) * nx + xx;
          if (out.labels[j]) uf.unite(out.labels[i], out.labels[j]);
        }
      }
    }
  }

  // Canonical renumbering: components get dense labels 1..K in order of
  // their first voxel's linear index, independent of chunk count.
  std::vector<std::uint32_t> dense(total + 1, 0);
  std::uint32_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t l = out.labels[i];
    if (!l) continue;
    const std::uint32_t r = uf.find(l);
    if (!dense[r]) {
      dense[r] = ++next;
      out.component_sizes.push_back(0);
    }
    out.labels[i] = dense[r];
    ++out.component_sizes[dense[r] - 1];
  }
  return out;
}

BinaryMask filter_small(const BinaryMask& m, Connectivity c,
                        std::uint64_t min_size) {
  const LabelMap lm = label_components(m, c);
  BinaryMask out(m.dims);
  const std::size_t n = m.bits.size();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    const std::uint32_t l = lm.labels[i];
    out.bits[i] = (l != 0 && lm.component_sizes[l - 1] >= min_size) ? 1 : 0;
  }
  return out;
}

ComponentStats component_stats(std::span<const BinaryMask> masks,
                               Connectivity c) {
  if (masks.empty()) fail(errc::bad_spec, "component_stats needs >= 1 mask");

  ComponentStats s;
  for (const BinaryMask& m : masks) {
    const LabelMap lm = label_components(m, c);
    s.total_components += lm.num_components();
    for (std::uint64_t sz : lm.component_sizes) s.total_voxels += sz;
  }
  s.avg_components_per_scan =
      static_cast<double>(s.total_components) / static_cast<double>(masks.size());
  s.avg_component_size =
      s.total_components == 0
          ? 0.0
          : static_cast<double>(s.total_voxels) /
                static_cast<double>(s.total_components);
  return s;
}

}  // namespace flairseg
