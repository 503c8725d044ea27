// SPDX-License-Identifier: Apache-2.0
//
// Masked histogram equalization of a volume. The equalized intensities are
// the anomaly scores: contrast-invariant, rank-preserving, in (0, 1] inside
// the mask and exactly 0 outside.
#pragma once

#include "flairseg/volume.hpp"

namespace flairseg {

struct EqualizeConfig {
  int bins = 256;  // must be >= 2
};

struct AnomalyMap {
  Dim3 dims;
  std::vector<double> scores;
  BinaryMask mask;  // the brain mask the scores were computed under
};

// Equalizes v restricted to mask: a `bins`-bin histogram spans
// [min, max] of the masked values, the normalized CDF is linearly
// interpolated at bin centers, and each masked voxel maps to the CDF at its
// value. Values at or below the first bin center map to the CDF of the first
// bin; at or above the last center to 1. Unmasked voxels score 0.
AnomalyMap equalize_hist(const Volume& v, const BinaryMask& mask,
                         const EqualizeConfig& cfg = {});

// Convenience composition brain_mask -> equalize_hist; the canonical
// anomaly-map entry point for skull-stripped volumes.
AnomalyMap equalize_volume(const Volume& v, const EqualizeConfig& cfg = {});

// Per-slice variant: each z-slice is equalized independently against its own
// masked histogram. Slices with an empty mask stay all-zero.
AnomalyMap equalize_hist_slicewise(const Volume& v, const BinaryMask& mask,
                                   const EqualizeConfig& cfg = {});

}  // namespace flairseg
