// SPDX-License-Identifier: Apache-2.0
#include "flairseg/error.hpp"

namespace flairseg {

const char* errc_name(errc c) noexcept {
  switch (c) {
    case errc::not_nifti: return "NotNifti";
    case errc::unsupported_datatype: return "UnsupportedDatatype";
    case errc::inconsistent_header: return "InconsistentHeader";
    case errc::truncated_payload: return "TruncatedPayload";
    case errc::decompress_failed: return "DecompressFailed";
    case errc::non_finite_data: return "NonFiniteData";
    case errc::io_error: return "IoError";
    case errc::value_range: return "ValueRangeError";
    case errc::window_out_of_bounds: return "WindowOutOfBounds";
    case errc::gt_out_of_range: return "GtOutOfRange";
    case errc::empty_mask: return "EmptyMask";
    case errc::dim_mismatch: return "DimMismatch";
    case errc::no_positives: return "NoPositives";
    case errc::degenerate_labels: return "DegenerateLabels";
    case errc::bad_manifest: return "BadManifest";
    case errc::bad_spec: return "BadSpec";
  }
  return "Error";
}

}  // namespace flairseg
