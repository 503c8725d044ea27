// SPDX-License-Identifier: Apache-2.0
#include "flairseg/nifti.hpp"

#include <zlib.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <vector>

#include "flairseg/volume.hpp"

namespace flairseg {

namespace {

constexpr std::size_t kHeaderSize = 348;
constexpr std::size_t kVoxOffset = 352;

bool host_is_little() {
  return std::endian::native == std::endian::little;
}

template <typename T>
T swap_bytes(T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  std::array<std::uint8_t, sizeof(T)> b;
  std::memcpy(b.data(), &v, sizeof(T));
  std::reverse(b.begin(), b.end());
  std::memcpy(&v, b.data(), sizeof(T));
  return v;
}

template <typename T>
T read_at(std::span<const std::uint8_t> bytes, std::size_t offset, bool swap) {
  T v;
  std::memcpy(&v, bytes.data() + offset, sizeof(T));
  return swap ? swap_bytes(v) : v;
}

template <typename T>
void put_at(std::vector<std::uint8_t>& buf, std::size_t offset, T v,
            bool swap) {
  if (swap) v = swap_bytes(v);
  std::memcpy(buf.data() + offset, &v, sizeof(T));
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::io_error, "cannot open " + path.string());
  std::vector<std::uint8_t> buf((std::istreambuf_iterator<char>(in)),
                                std::istreambuf_iterator<char>());
  if (in.bad()) fail(errc::io_error, "read failed for " + path.string());
  return buf;
}

bool is_gzip(std::span<const std::uint8_t> bytes) {
  return bytes.size() >= 2 && bytes[0] == 0x1F && bytes[1] == 0x8B;
}

std::vector<std::uint8_t> gunzip(std::span<const std::uint8_t> bytes) {
  z_stream zs{};
  // 15 + 16: zlib decodes the RFC 1952 gzip container.
  if (inflateInit2(&zs, 15 + 16) != Z_OK)
    fail(errc::decompress_failed, "inflateInit2 failed");

  std::vector<std::uint8_t> out;
  out.resize(std::max<std::size_t>(bytes.size() * 4, 1 << 16));
  zs.next_in = const_cast<Bytef*>(bytes.data());
  zs.avail_in = static_cast<uInt>(bytes.size());

  int rc = Z_OK;
  std::size_t written = 0;
  while (rc != Z_STREAM_END) {
    if (written == out.size()) out.resize(out.size() * 2);
    zs.next_out = out.data() + written;
    zs.avail_out = static_cast<uInt>(out.size() - written);
    rc = inflate(&zs, Z_NO_FLUSH);
    written = out.size() - zs.avail_out;
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&zs);
      fail(errc::decompress_failed,
           std::string("inflate failed: ") + (zs.msg ? zs.msg : "corrupt stream"));
    }
  }
  inflateEnd(&zs);
  out.resize(written);
  return out;
}

std::vector<std::uint8_t> gzip_compress(std::span<const std::uint8_t> bytes) {
  z_stream zs{};
  // Default gzip header (zero mtime), so outputs are byte-reproducible.
  if (deflateInit2(&zs, Z_DEFAULT_COMPRESSION, Z_DEFLATED, 15 + 16, 8,
                   Z_DEFAULT_STRATEGY) != Z_OK)
    fail(errc::io_error, "deflateInit2 failed");

  std::vector<std::uint8_t> out(deflateBound(&zs, static_cast<uLong>(bytes.size())));
  zs.next_in = const_cast<Bytef*>(bytes.data());
  zs.avail_in = static_cast<uInt>(bytes.size());
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  if (deflate(&zs, Z_FINISH) != Z_STREAM_END) {
    deflateEnd(&zs);
    fail(errc::io_error, "deflate failed");
  }
  out.resize(out.size() - zs.avail_out);
  deflateEnd(&zs);
  return out;
}

template <typename T>
void decode_payload(std::span<const std::uint8_t> raw, bool swap,
                    std::vector<double>& out) {
  const std::size_t n = out.size();
  for (std::size_t i = 0; i < n; ++i) {
    T v;
    std::memcpy(&v, raw.data() + i * sizeof(T), sizeof(T));
    if (swap) v = swap_bytes(v);
    out[i] = static_cast<double>(v);
  }
}

template <typename T>
void encode_payload(const std::vector<double>& data, bool swap,
                    std::vector<std::uint8_t>& out) {
  out.resize(data.size() * sizeof(T));
  for (std::size_t i = 0; i < data.size(); ++i) {
    T v;
    if constexpr (std::is_integral_v<T>) {
      const double r = std::nearbyint(data[i]);
      if (r < static_cast<double>(std::numeric_limits<T>::min()) ||
          r > static_cast<double>(std::numeric_limits<T>::max()))
        fail(errc::value_range, "value " + std::to_string(data[i]) +
                                    " does not fit the integer datatype");
      v = static_cast<T>(r);
    } else {
      v = static_cast<T>(data[i]);
    }
    if (swap) v = swap_bytes(v);
    std::memcpy(out.data() + i * sizeof(T), &v, sizeof(T));
  }
}

}  // namespace

bool datatype_supported(std::int16_t code) noexcept {
  switch (code) {
    case dtype::uint8:
    case dtype::int16:
    case dtype::int32:
    case dtype::float32:
    case dtype::float64:
      return true;
    default:
      return false;
  }
}

int datatype_bitpix(std::int16_t code) {
  switch (code) {
    case dtype::uint8:
      return 8;
    case dtype::int16:
      return 16;
    case dtype::int32:
    case dtype::float32:
      return 32;
    case dtype::float64:
      return 64;
    default:
      fail(errc::unsupported_datatype,
           "datatype code " + std::to_string(code));
  }
}

NiftiHeader parse_header(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderSize)
    fail(errc::not_nifti, "only " + std::to_string(bytes.size()) +
                              " bytes available, need 348");

  std::int32_t raw_size = read_at<std::int32_t>(bytes, 0, false);
  bool swap = false;
  if (raw_size != 348) {
    if (swap_bytes(raw_size) != 348)
      fail(errc::not_nifti, "sizeof_hdr is not 348 in either byte order");
    swap = true;
  }

  NiftiHeader h;
  h.sizeof_hdr = 348;
  h.endianness = (host_is_little() != swap) ? Endian::little : Endian::big;

  for (int i = 0; i < 8; ++i)
    h.dim[i] = read_at<std::int16_t>(bytes, 40 + 2 * i, swap);
  h.datatype_code = read_at<std::int16_t>(bytes, 70, swap);
  h.bitpix = read_at<std::int16_t>(bytes, 72, swap);
  for (int i = 0; i < 8; ++i)
    h.pixdim[i] = read_at<float>(bytes, 76 + 4 * i, swap);
  h.vox_offset = read_at<float>(bytes, 108, swap);
  h.scl_slope = read_at<float>(bytes, 112, swap);
  h.scl_inter = read_at<float>(bytes, 116, swap);
  std::memcpy(h.magic.data(), bytes.data() + 344, 4);

  h.qform_code = read_at<std::int16_t>(bytes, 252, swap);
  h.sform_code = read_at<std::int16_t>(bytes, 254, swap);
  for (int i = 0; i < 6; ++i)
    h.quatern[i] = read_at<float>(bytes, 256 + 4 * i, swap);
  for (int i = 0; i < 12; ++i)
    h.srow[i] = read_at<float>(bytes, 280 + 4 * i, swap);

  if (std::memcmp(h.magic.data(), "n+1\0", 4) != 0)
    fail(errc::not_nifti, "magic is not \"n+1\" (single-file NIfTI-1)");
  if (!datatype_supported(h.datatype_code))
    fail(errc::unsupported_datatype,
         "datatype code " + std::to_string(h.datatype_code));
  if (h.dim[0] < 1 || h.dim[0] > 7)
    fail(errc::inconsistent_header,
         "dim[0] = " + std::to_string(h.dim[0]) + " out of [1,7]");
  for (int i = 1; i <= std::min<int>(h.dim[0], 7); ++i)
    if (h.dim[i] < 1)
      fail(errc::inconsistent_header,
           "dim[" + std::to_string(i) + "] = " + std::to_string(h.dim[i]));
  if (h.bitpix != datatype_bitpix(h.datatype_code))
    fail(errc::inconsistent_header,
         "bitpix " + std::to_string(h.bitpix) + " inconsistent with datatype " +
             std::to_string(h.datatype_code));
  if (h.vox_offset < 348.0f)
    fail(errc::inconsistent_header,
         "vox_offset " + std::to_string(h.vox_offset) + " < 348");
  return h;
}

Volume read_volume(const std::filesystem::path& path) {
  std::vector<std::uint8_t> bytes = read_file(path);
  if (is_gzip(bytes)) bytes = gunzip(bytes);

  const NiftiHeader h = parse_header(bytes);
  const bool swap = (h.endianness == Endian::little) != host_is_little();

  Volume v;
  v.dims = Dim3{h.nx(), h.ny(), h.nz()};
  for (int a = 0; a < 3; ++a) {
    const float p = h.pixdim[a + 1];
    v.spacing[a] = p > 0.0f ? static_cast<double>(p) : 1.0;
  }
  v.source_header = h;

  const std::size_t offset = static_cast<std::size_t>(h.vox_offset);
  const std::size_t voxel_bytes = static_cast<std::size_t>(h.bitpix) / 8;
  const std::size_t need = v.dims.voxels() * voxel_bytes;
  if (bytes.size() < offset || bytes.size() - offset < need)
    fail(errc::truncated_payload,
         path.string() + ": need " + std::to_string(need) + " payload bytes, have " +
             std::to_string(bytes.size() > offset ? bytes.size() - offset : 0));

  std::span<const std::uint8_t> raw(bytes.data() + offset, need);
  v.data.resize(v.dims.voxels());
  switch (h.datatype_code) {
    case dtype::uint8:
      decode_payload<std::uint8_t>(raw, swap, v.data);
      break;
    case dtype::int16:
      decode_payload<std::int16_t>(raw, swap, v.data);
      break;
    case dtype::int32:
      decode_payload<std::int32_t>(raw, swap, v.data);
      break;
    case dtype::float32:
      decode_payload<float>(raw, swap, v.data);
      break;
    case dtype::float64:
      decode_payload<double>(raw, swap, v.data);
      break;
  }

  // scl_slope == 0 means identity scaling per NIfTI-1 convention.
  const double slope = static_cast<double>(h.scl_slope);
  const double inter = static_cast<double>(h.scl_inter);
  if (h.scl_slope != 0.0f && (slope != 1.0 || inter != 0.0)) {
    for (double& x : v.data) x = slope * x + inter;
  }
  for (double x : v.data)
    if (!std::isfinite(x))
      fail(errc::non_finite_data, path.string() + ": NaN/Inf voxel");
  return v;
}

void write_volume(const Volume& v, const std::filesystem::path& path,
                  const NiftiWriteOptions& opts) {
  if (!datatype_supported(opts.datatype))
    fail(errc::unsupported_datatype,
         "datatype code " + std::to_string(opts.datatype));
  if (v.data.size() != v.dims.voxels())
    fail(errc::dim_mismatch, "volume data length does not match dims");

  const bool swap = (opts.endianness == Endian::little) != host_is_little();
  const int bitpix = datatype_bitpix(opts.datatype);

  std::vector<std::uint8_t> buf(kVoxOffset, 0);
  put_at<std::int32_t>(buf, 0, 348, swap);
  put_at<std::uint8_t>(buf, 38, 'r', false);  // regular, ANALYZE heritage

  std::array<std::int16_t, 8> dim{3,
                                  static_cast<std::int16_t>(v.dims.nx),
                                  static_cast<std::int16_t>(v.dims.ny),
                                  static_cast<std::int16_t>(v.dims.nz),
                                  1, 1, 1, 1};
  for (int i = 0; i < 8; ++i) put_at<std::int16_t>(buf, 40 + 2 * i, dim[i], swap);
  put_at<std::int16_t>(buf, 70, opts.datatype, swap);
  put_at<std::int16_t>(buf, 72, static_cast<std::int16_t>(bitpix), swap);

  std::array<float, 8> pixdim{1.0f,
                              static_cast<float>(v.spacing[0]),
                              static_cast<float>(v.spacing[1]),
                              static_cast<float>(v.spacing[2]),
                              0.0f, 0.0f, 0.0f, 0.0f};
  for (int i = 0; i < 8; ++i) put_at<float>(buf, 76 + 4 * i, pixdim[i], swap);
  put_at<float>(buf, 108, static_cast<float>(kVoxOffset), swap);
  put_at<float>(buf, 112, 1.0f, swap);  // scl_slope
  put_at<float>(buf, 116, 0.0f, swap);  // scl_inter
  put_at<std::uint8_t>(buf, 123, 2, false);  // xyzt_units: millimetres

  if (v.source_header) {
    const NiftiHeader& s = *v.source_header;
    put_at<std::int16_t>(buf, 252, s.qform_code, swap);
    put_at<std::int16_t>(buf, 254, s.sform_code, swap);
    for (int i = 0; i < 6; ++i) put_at<float>(buf, 256 + 4 * i, s.quatern[i], swap);
    for (int i = 0; i < 12; ++i) put_at<float>(buf, 280 + 4 * i, s.srow[i], swap);
  }
  std::memcpy(buf.data() + 344, "n+1\0", 4);
  // bytes 348..352 stay zero: no extensions.

  std::vector<std::uint8_t> payload;
  switch (opts.datatype) {
    case dtype::uint8:
      encode_payload<std::uint8_t>(v.data, swap, payload);
      break;
    case dtype::int16:
      encode_payload<std::int16_t>(v.data, swap, payload);
      break;
    case dtype::int32:
      encode_payload<std::int32_t>(v.data, swap, payload);
      break;
    case dtype::float32:
      encode_payload<float>(v.data, swap, payload);
      break;
    case dtype::float64:
      encode_payload<double>(v.data, swap, payload);
      break;
  }
  buf.insert(buf.end(), payload.begin(), payload.end());

  if (opts.gzip) buf = gzip_compress(buf);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(errc::io_error, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size()));
  if (!out) fail(errc::io_error, "write failed for " + path.string());
}

}  // namespace flairseg
