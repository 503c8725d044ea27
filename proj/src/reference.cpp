// SPDX-License-Identifier: Apache-2.0
#include "flairseg/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace flairseg::ref {

namespace {

inline double source_coord(int t, int target_extent, int source_extent) {
  const double s = (t + 0.5) * static_cast<double>(source_extent) /
                       static_cast<double>(target_extent) -
                   0.5;
  return std::clamp(s, 0.0, static_cast<double>(source_extent - 1));
}

inline int nearest_index(int t, int target_extent, int source_extent) {
  return static_cast<int>(std::ceil(source_coord(t, target_extent, source_extent) - 0.5));
}

}  // namespace

BinaryMask brain_mask(const Volume& v) {
  BinaryMask m(v.dims);
  for (std::size_t i = 0; i < v.data.size(); ++i)
    m.bits[i] = v.data[i] > 0.0 ? 1 : 0;
  return m;
}

Volume resize_slices(const Volume& v, int width, int height,
                     ResampleMethod method) {
  if (width < 1 || height < 1)
    fail(errc::bad_spec, "target resolution must be at least 1x1");

  Volume out;
  out.dims = Dim3{width, height, v.dims.nz};
  out.spacing = {v.spacing[0] * v.dims.nx / width,
                 v.spacing[1] * v.dims.ny / height, v.spacing[2]};
  out.source_header = v.source_header;
  out.data.resize(out.dims.voxels());

  const int nx = v.dims.nx, ny = v.dims.ny;
  if (width == nx && height == ny) {
    out.data = v.data;
    return out;
  }

  for (int z = 0; z < v.dims.nz; ++z) {
    const double* src = v.data.data() + linear_index(v.dims, 0, 0, z);
    double* dst = out.data.data() + linear_index(out.dims, 0, 0, z);
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        double value;
        if (method == ResampleMethod::nearest) {
          value = src[static_cast<std::size_t>(nearest_index(y, height, ny)) * nx +
                      nearest_index(x, width, nx)];
        } else {
          const double sy = source_coord(y, height, ny);
          const double sx = source_coord(x, width, nx);
          const int y0 = static_cast<int>(sy), x0 = static_cast<int>(sx);
          const int y1 = std::min(y0 + 1, ny - 1), x1 = std::min(x0 + 1, nx - 1);
          const double fy = sy - y0, fx = sx - x0;
          const double top = (1.0 - fx) * src[static_cast<std::size_t>(y0) * nx + x0] +
                             fx * src[static_cast<std::size_t>(y0) * nx + x1];
          const double bot = (1.0 - fx) * src[static_cast<std::size_t>(y1) * nx + x0] +
                             fx * src[static_cast<std::size_t>(y1) * nx + x1];
          value = (1.0 - fy) * top + fy * bot;
        }
        dst[static_cast<std::size_t>(y) * width + x] = value;
      }
    }
  }
  return out;
}

AnomalyMap equalize_hist(const Volume& v, const BinaryMask& mask,
                         const EqualizeConfig& cfg) {
  if (v.dims != mask.dims)
    fail(errc::dim_mismatch, "volume and mask dims differ");
  if (cfg.bins < 2) fail(errc::bad_spec, "bins must be >= 2");

  double vmin = std::numeric_limits<double>::infinity();
  double vmax = -std::numeric_limits<double>::infinity();
  std::uint64_t in_mask = 0;
  for (std::size_t i = 0; i < v.data.size(); ++i) {
    if (!mask.bits[i]) continue;
    ++in_mask;
    vmin = std::min(vmin, v.data[i]);
    vmax = std::max(vmax, v.data[i]);
  }
  if (in_mask == 0) fail(errc::empty_mask, "mask has no true voxel");

  AnomalyMap out;
  out.dims = v.dims;
  out.mask = mask;
  out.scores.resize(v.data.size());

  if (!(vmax > vmin)) {
    for (std::size_t i = 0; i < v.data.size(); ++i)
      out.scores[i] = mask.bits[i] ? 1.0 : 0.0;
    return out;
  }

  const int bins = cfg.bins;
  const double range = vmax - vmin;
  std::vector<std::uint64_t> hist(bins, 0);
  for (std::size_t i = 0; i < v.data.size(); ++i) {
    if (!mask.bits[i]) continue;
    ++hist[std::min(bins - 1,
                    static_cast<int>((v.data[i] - vmin) / range * bins))];
  }
  std::vector<double> cdf(bins);
  std::uint64_t cum = 0;
  for (int b = 0; b < bins; ++b) {
    cum += hist[b];
    cdf[b] = static_cast<double>(cum) / static_cast<double>(in_mask);
  }

  for (std::size_t i = 0; i < v.data.size(); ++i) {
    if (!mask.bits[i]) {
      out.scores[i] = 0.0;
      continue;
    }
    const double u = (v.data[i] - vmin) / range * bins - 0.5;
    if (u <= 0.0) {
      out.scores[i] = cdf[0];
    } else if (u >= bins - 1) {
      out.scores[i] = 1.0;
    } else {
      const int j = static_cast<int>(u);
      out.scores[i] = cdf[j] + (u - j) * (cdf[j + 1] - cdf[j]);
    }
  }
  return out;
}

LabelMap label_components(const BinaryMask& m, Connectivity c) {
  const int nx = m.dims.nx, ny = m.dims.ny, nz = m.dims.nz;
  const std::size_t slice = static_cast<std::size_t>(nx) * ny;
  const int max_manhattan = c == Connectivity::c6 ? 1
                            : c == Connectivity::c18 ? 2
                                                     : 3;

  LabelMap out;
  out.dims = m.dims;
  out.labels.assign(m.bits.size(), 0);

  std::vector<std::uint32_t> parent(1, 0);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  auto unite = [&](std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent[b] = a;
  };

  for (int z = 0; z < nz; ++z)
    for (int y = 0; y < ny; ++y)
      for (int x = 0; x < nx; ++x) {
        const std::size_t i = slice * z + static_cast<std::size_t>(y) * nx + x;
        if (!m.bits[i]) continue;
        std::uint32_t adopted = 0;
        for (int dz = -1; dz <= 0; ++dz)
          for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
              const bool backward =
                  dz < 0 || (dz == 0 && (dy < 0 || (dy == 0 && dx < 0)));
              if (!backward ||
                  std::abs(dx) + std::abs(dy) + std::abs(dz) > max_manhattan)
                continue;
              const int xx = x + dx, yy = y + dy, zz = z + dz;
              if (xx < 0 || xx >= nx || yy < 0 || yy >= ny || zz < 0) continue;
              const std::uint32_t lj =
                  out.labels[slice * zz + static_cast<std::size_t>(yy) * nx + xx];
              if (!lj) continue;
              if (!adopted)
                adopted = lj;
              else
                unite(adopted, lj);
            }
        if (!adopted) {
          parent.push_back(static_cast<std::uint32_t>(parent.size()));
          adopted = static_cast<std::uint32_t>(parent.size() - 1);
        }
        out.labels[i] = adopted;
      }

  std::vector<std::uint32_t> dense(parent.size(), 0);
  std::uint32_t next = 0;
  for (std::size_t i = 0; i < out.labels.size(); ++i) {
    const std::uint32_t l = out.labels[i];
    if (!l) continue;
    const std::uint32_t r = find(l);
    if (!dense[r]) {
      dense[r] = ++next;
      out.component_sizes.push_back(0);
    }
    out.labels[i] = dense[r];
    ++out.component_sizes[dense[r] - 1];
  }
  return out;
}

double dice(const BinaryMask& pred, const BinaryMask& gt) {
  if (pred.dims != gt.dims)
    fail(errc::dim_mismatch, "dice: mask dims differ");
  std::uint64_t inter = 0, a = 0, b = 0;
  for (std::size_t i = 0; i < pred.bits.size(); ++i) {
    const bool p = pred.bits[i] != 0, g = gt.bits[i] != 0;
    inter += p && g;
    a += p;
    b += g;
  }
  if (a + b == 0) return 1.0;
  return 2.0 * static_cast<double>(inter) / static_cast<double>(a + b);
}

}  // namespace flairseg::ref
