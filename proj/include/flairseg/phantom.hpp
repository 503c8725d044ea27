// SPDX-License-Identifier: Apache-2.0
//
// Synthetic FLAIR-like phantoms with exact recorded ground truth: an
// ellipsoidal "brain" of textured baseline intensity on a zero background,
// plus spherical hyperintense lesions. Deterministic for a given seed, so
// pipelines can be verified without access to clinical data.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flairseg/volume.hpp"

namespace flairseg {

struct PhantomSpec {
  std::uint64_t seed = 1;
  Dim3 dims{128, 128, 140};
  int n_lesions = 4;
  double radius_min = 9.0;  // voxels
  double radius_max = 13.0;
  // Multiplier applied to the baseline texture inside lesions. Baseline is
  // uniform in [0.8, 1.2), so any contrast > 1.5 makes every lesion voxel
  // strictly brighter than every normal brain voxel. 1.0 = invisible lesions.
  double lesion_contrast = 2.0;
  // Gaussian sigma (voxels) applied to the emitted ground truth, simulating
  // the aliasing that registration introduces into initially-binary masks.
  double registration_blur = 0.0;
};

struct LesionRecord {
  double cx, cy, cz;
  double radius;
  std::uint64_t voxels;
};

struct PhantomTruth {
  BinaryMask brain;
  BinaryMask lesions;  // exact, pre-blur
  std::vector<LesionRecord> lesion_list;
  std::uint64_t brain_voxels = 0;
  std::uint64_t lesion_voxels = 0;
};

struct Phantom {
  Volume flair;
  Volume gt;  // {0,1} voxels, fractional in [0,1] when blur > 0
  PhantomTruth truth;
};

Phantom generate_phantom(const PhantomSpec& spec);

}  // namespace flairseg
