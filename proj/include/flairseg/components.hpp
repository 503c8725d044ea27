// SPDX-License-Identifier: Apache-2.0
//
// 3D connected-component labeling on binary masks (6/18/26 neighborhoods),
// minimum-size filtering, and dataset component statistics. Labeling is
// iterative (two-pass union-find), never recursive, so million-voxel
// components at realistic scan sizes are safe.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "flairseg/volume.hpp"

namespace flairseg {

enum class Connectivity : int { c6 = 6, c18 = 18, c26 = 26 };

Connectivity connectivity_from_int(int k);  // throws bad_spec

struct LabelMap {
  Dim3 dims;
  std::vector<std::uint32_t> labels;            // 0 = background
  std::vector<std::uint64_t> component_sizes;   // indexed by label - 1

  std::uint32_t num_components() const {
    return static_cast<std::uint32_t>(component_sizes.size());
  }
};

// Labels are dense 1..K, numbered by ascending linear index of each
// component's first voxel, so the result is independent of thread count.
LabelMap label_components(const BinaryMask& m, Connectivity c);

// Keeps exactly the voxels belonging to components of size >= min_size
// (strictly smaller components are discarded).
BinaryMask filter_small(const BinaryMask& m, Connectivity c,
                        std::uint64_t min_size);

struct ComponentStats {
  double avg_components_per_scan = 0.0;
  double avg_component_size = 0.0;  // voxels; 0 when there are no components
  std::uint64_t total_components = 0;
  std::uint64_t total_voxels = 0;
};

ComponentStats component_stats(std::span<const BinaryMask> masks,
                               Connectivity c);

}  // namespace flairseg
