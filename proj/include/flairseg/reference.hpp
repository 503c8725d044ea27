// SPDX-License-Identifier: Apache-2.0
//
// Plain serial implementations of the parallel kernels. They follow the same
// contracts as the OpenMP versions in the main library and must produce
// bit-identical results; tests compare the two and the benchmark target
// measures the speedup.
#pragma once

#include "flairseg/components.hpp"
#include "flairseg/equalize.hpp"
#include "flairseg/volume_ops.hpp"

namespace flairseg::ref {

BinaryMask brain_mask(const Volume& v);

Volume resize_slices(const Volume& v, int width, int height,
                     ResampleMethod method);

AnomalyMap equalize_hist(const Volume& v, const BinaryMask& mask,
                         const EqualizeConfig& cfg = {});

// Single-pass-chunk two-pass union-find labeling, no chunk stitching.
LabelMap label_components(const BinaryMask& m, Connectivity c);

double dice(const BinaryMask& pred, const BinaryMask& gt);

}  // namespace flairseg::ref
