// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace flairseg {

enum class errc {
  not_nifti,
  unsupported_datatype,
  inconsistent_header,
  truncated_payload,
  decompress_failed,
  non_finite_data,
  io_error,
  value_range,
  window_out_of_bounds,
  gt_out_of_range,
  empty_mask,
  dim_mismatch,
  no_positives,
  degenerate_labels,
  bad_manifest,
  bad_spec,
};

const char* errc_name(errc c) noexcept;

class error : public std::runtime_error {
public:
  error(errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  errc code() const noexcept { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
  throw error(code, message);
}

}  // namespace flairseg
