// SPDX-License-Identifier: Apache-2.0
#include "flairseg/volume_ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace flairseg {

namespace {

// Pixel-center source coordinate for target index t, clamped to the grid.
inline double source_coord(int t, int target_extent, int source_extent) {
  const double s = (t + 0.5) * static_cast<double>(source_extent) /
                       static_cast<double>(target_extent) -
                   0.5;
  return std::clamp(s, 0.0, static_cast<double>(source_extent - 1));
}

// Nearest index with halves rounding toward the lower index.
inline int nearest_index(int t, int target_extent, int source_extent) {
  const double s = source_coord(t, target_extent, source_extent);
  return static_cast<int>(std::ceil(s - 0.5));
}

void check_target(int width, int height) {
  if (width < 1 || height < 1)
    fail(errc::bad_spec, "target resolution must be at least 1x1");
}

}  // namespace

BinaryMask brain_mask(const Volume& v) {
  BinaryMask m(v.dims);
  const std::size_t n = v.data.size();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
    m.bits[i] = v.data[i] > 0.0 ? 1 : 0;
  return m;
}

Volume select_slices(const Volume& v, const SliceWindow& w) {
  if (w.lo < 0 || w.hi < w.lo || w.hi >= v.dims.nz)
    fail(errc::window_out_of_bounds,
         "window [" + std::to_string(w.lo) + "," + std::to_string(w.hi) +
             "] outside volume with " + std::to_string(v.dims.nz) + " slices");

  Volume out;
  out.dims = Dim3{v.dims.nx, v.dims.ny, w.size()};
  out.spacing = v.spacing;
  out.source_header = v.source_header;
  out.data.resize(out.dims.voxels());

  const std::size_t slice = static_cast<std::size_t>(v.dims.nx) * v.dims.ny;
  std::memcpy(out.data.data(), v.data.data() + slice * w.lo,
              out.data.size() * sizeof(double));
  return out;
}

Volume resize_slices(const Volume& v, int width, int height,
                     ResampleMethod method) {
  check_target(width, height);

  Volume out;
  out.dims = Dim3{width, height, v.dims.nz};
  out.spacing = {v.spacing[0] * v.dims.nx / width,
                 v.spacing[1] * v.dims.ny / height, v.spacing[2]};
  out.source_header = v.source_header;
  out.data.resize(out.dims.voxels());

  const int nx = v.dims.nx, ny = v.dims.ny, nz = v.dims.nz;
  if (width == nx && height == ny) {
    out.data = v.data;
    return out;
  }

#pragma omp parallel for schedule(static)
  for (int z = 0; z < nz; ++z) {
    const double* src = v.data.data() + linear_index(v.dims, 0, 0, z);
    double* dst = out.data.data() + linear_index(out.dims, 0, 0, z);
    for (int y = 0; y < height; ++y) {
      if (method == ResampleMethod::nearest) {
        const int ys = nearest_index(y, height, ny);
        for (int x = 0; x < width; ++x) {
          const int xs = nearest_index(x, width, nx);
          dst[static_cast<std::size_t>(y) * width + x] =
              src[static_cast<std::size_t>(ys) * nx + xs];
        }
      } else {
        const double sy = source_coord(y, height, ny);
        const int y0 = static_cast<int>(sy);
        const int y1 = std::min(y0 + 1, ny - 1);
        const double fy = sy - y0;
        for (int x = 0; x < width; ++x) {
          const double sx = source_coord(x, width, nx);
          const int x0 = static_cast<int>(sx);
          const int x1 = std::min(x0 + 1, nx - 1);
          const double fx = sx - x0;
          const double top = (1.0 - fx) * src[static_cast<std::size_t>(y0) * nx + x0] +
                             fx * src[static_cast<std::size_t>(y0) * nx + x1];
          const double bot = (1.0 - fx) * src[static_cast<std::size_t>(y1) * nx + x0] +
                             fx * src[static_cast<std::size_t>(y1) * nx + x1];
          dst[static_cast<std::size_t>(y) * width + x] = (1.0 - fy) * top + fy * bot;
        }
      }
    }
  }
  return out;
}

BinaryMask resize_mask_nearest(const BinaryMask& m, int width, int height) {
  check_target(width, height);
  if (width == m.dims.nx && height == m.dims.ny) return m;

  BinaryMask out(Dim3{width, height, m.dims.nz});
  const int nx = m.dims.nx, ny = m.dims.ny, nz = m.dims.nz;
#pragma omp parallel for schedule(static)
  for (int z = 0; z < nz; ++z) {
    const std::uint8_t* src = m.bits.data() + linear_index(m.dims, 0, 0, z);
    std::uint8_t* dst = out.bits.data() + linear_index(out.dims, 0, 0, z);
    for (int y = 0; y < height; ++y) {
      const int ys = nearest_index(y, height, ny);
      for (int x = 0; x < width; ++x) {
        const int xs = nearest_index(x, width, nx);
        dst[static_cast<std::size_t>(y) * width + x] =
            src[static_cast<std::size_t>(ys) * nx + xs];
      }
    }
  }
  return out;
}

BinaryMask binarize_gt(const Volume& gt, double threshold) {
  constexpr double kSlack = 1e-6;
  BinaryMask m(gt.dims);
  const std::size_t n = gt.data.size();
  bool out_of_range = false;
#pragma omp parallel for schedule(static) reduction(|| : out_of_range)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    const double v = gt.data[i];
    out_of_range = out_of_range || v < -kSlack || v > 1.0 + kSlack;
    m.bits[i] = v > threshold ? 1 : 0;
  }
  if (out_of_range)
    fail(errc::gt_out_of_range, "ground-truth values outside [0,1]");
  return m;
}

}  // namespace flairseg
