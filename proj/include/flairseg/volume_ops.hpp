// SPDX-License-Identifier: Apache-2.0
//
// Geometric and mask transforms: brain-mask extraction, slice-window
// selection, per-slice resampling and ground-truth binarization.
#pragma once

#include "flairseg/volume.hpp"

namespace flairseg {

// Inclusive z-slice window [lo, hi].
struct SliceWindow {
  int lo = 0;
  int hi = 0;
  int size() const { return hi - lo + 1; }
};

enum class ResampleMethod { bilinear, nearest };

// True where voxel > 0. Inputs are skull-stripped, so background is zero.
// An all-zero volume yields an empty mask.
BinaryMask brain_mask(const Volume& v);

// Copies slices [w.lo, w.hi] into a new volume; spacing preserved.
Volume select_slices(const Volume& v, const SliceWindow& w);

// Resamples every z-slice independently to width x height. Bilinear uses
// pixel-center alignment with edge clamping: x_src = (x + 0.5)*nx/W - 0.5.
// Nearest rounds halves toward the lower index. Spacing is rescaled by
// (nx/W, ny/H, 1); the z-axis is untouched.
Volume resize_slices(const Volume& v, int width, int height,
                     ResampleMethod method);

// Same nearest-neighbor index mapping applied to a binary mask.
BinaryMask resize_mask_nearest(const BinaryMask& m, int width, int height);

// Mask of voxels with value strictly greater than threshold. Values must lie
// in [0, 1] up to 1e-6 slack; anything else is a GtOutOfRange error.
BinaryMask binarize_gt(const Volume& gt, double threshold);

}  // namespace flairseg
