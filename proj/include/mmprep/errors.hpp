// Copyright 2026 The mmprep Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace mmprep {

enum class ErrorCode {
  invalid_range,
  invalid_dimensions,
  inconsistent_plan,
  parse_error,
  range_error,
  order_error,
  frame_mismatch,
  invalid_tile,
  cyclic_reference,
  zero_total_mass,
  empty_category,
  unknown_benchmark,
  out_of_range,
  missing_benchmark,
  schema_error,
  io_error,
  invalid_distribution,
};

class ToolkitError : public std::runtime_error {
 public:
  ToolkitError(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mmprep
