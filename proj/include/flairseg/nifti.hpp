// SPDX-License-Identifier: Apache-2.0
//
// NIfTI-1 single-file (.nii / .nii.gz) reading and writing. Only the header
// fields needed for correct voxel interpretation are decoded; the orientation
// block (qform/sform) is carried through verbatim for pass-through writing
// but never interpreted. Extension blocks between byte 348 and vox_offset are
// skipped on read and never written.
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

#include "flairseg/error.hpp"

namespace flairseg {

struct Volume;  // volume.hpp

enum class Endian { little, big };

// NIfTI-1 datatype codes for the supported subset.
namespace dtype {
inline constexpr std::int16_t uint8 = 2;
inline constexpr std::int16_t int16 = 4;
inline constexpr std::int16_t int32 = 8;
inline constexpr std::int16_t float32 = 16;
inline constexpr std::int16_t float64 = 64;
}  // namespace dtype

bool datatype_supported(std::int16_t code) noexcept;
int datatype_bitpix(std::int16_t code);  // throws unsupported_datatype

struct NiftiHeader {
  std::int32_t sizeof_hdr = 348;
  std::array<std::int16_t, 8> dim{};
  std::int16_t datatype_code = dtype::float32;
  std::int16_t bitpix = 32;
  std::array<float, 8> pixdim{};
  float vox_offset = 352.0f;
  float scl_slope = 0.0f;  // 0 means "no scaling" per NIfTI-1 convention
  float scl_inter = 0.0f;
  std::array<char, 4> magic{'n', '+', '1', '\0'};
  Endian endianness = Endian::little;

  // Orientation pass-through block (bytes 252..328), preserved, not used.
  std::int16_t qform_code = 0;
  std::int16_t sform_code = 0;
  std::array<float, 6> quatern{};  // quatern_b,c,d, qoffset_x,y,z
  std::array<float, 12> srow{};    // srow_x, srow_y, srow_z

  int nx() const { return dim[1]; }
  int ny() const { return dim[0] >= 2 ? dim[2] : 1; }
  int nz() const { return dim[0] >= 3 ? dim[3] : 1; }
};

// Decodes a header from at least 348 raw bytes. Endianness is detected by
// testing sizeof_hdr == 348 under both byte orders.
NiftiHeader parse_header(std::span<const std::uint8_t> bytes);

// Reads a .nii file or a gzip stream containing one (detected by the gzip
// magic bytes, not the extension). Voxels are decoded, byte-swapped if
// needed and scaled v' = scl_slope*v + scl_inter when scl_slope != 0.
Volume read_volume(const std::filesystem::path& path);

struct NiftiWriteOptions {
  std::int16_t datatype = dtype::float32;
  bool gzip = false;
  Endian endianness = Endian::little;
};

// Emits a valid single-file NIfTI-1 volume: 348-byte header, magic "n+1\0",
// vox_offset 352, 4 zero pad bytes, then the voxel payload.
void write_volume(const Volume& v, const std::filesystem::path& path,
                  const NiftiWriteOptions& opts = {});

}  // namespace flairseg
