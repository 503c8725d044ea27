// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "flairseg/nifti.hpp"

namespace flairseg {

struct Dim3 {
  int nx = 0;
  int ny = 0;
  int nz = 0;

  std::size_t voxels() const {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) *
           static_cast<std::size_t>(nz);
  }
  bool operator==(const Dim3&) const = default;
};

// Linear voxel order: x fastest, then y, then z (NIfTI convention).
inline std::size_t linear_index(const Dim3& d, int x, int y, int z) {
  return static_cast<std::size_t>(x) +
         static_cast<std::size_t>(d.nx) *
             (static_cast<std::size_t>(y) +
              static_cast<std::size_t>(d.ny) * static_cast<std::size_t>(z));
}

// A 3D scalar grid with spacing metadata. The universal carrier for FLAIR
// scans, anomaly maps and label volumes. All values are finite.
struct Volume {
  Dim3 dims;
  std::array<double, 3> spacing{1.0, 1.0, 1.0};
  std::vector<double> data;
  std::optional<NiftiHeader> source_header;

  Volume() = default;
  Volume(Dim3 d, double fill = 0.0)
      : dims(d), data(d.voxels(), fill) {}

  double& at(int x, int y, int z) { return data[linear_index(dims, x, y, z)]; }
  double at(int x, int y, int z) const {
    return data[linear_index(dims, x, y, z)];
  }
};

// 3D boolean grid, one byte per voxel, same linear order as Volume.
struct BinaryMask {
  Dim3 dims;
  std::vector<std::uint8_t> bits;

  BinaryMask() = default;
  explicit BinaryMask(Dim3 d, bool fill = false)
      : dims(d), bits(d.voxels(), fill ? 1 : 0) {}

  bool test(std::size_t i) const { return bits[i] != 0; }
  void set(std::size_t i, bool v) { bits[i] = v ? 1 : 0; }

  std::uint64_t count() const {
    std::uint64_t n = 0;
    for (std::uint8_t b : bits) n += b != 0;
    return n;
  }
};

}  // namespace flairseg
