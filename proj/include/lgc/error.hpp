// Copyright 2026 The lgc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace lgc {

enum class ErrorCode {
  kNotSquare = 1,
  kSingularBasis,
  kUnknownName,
  kDimensionMismatch,
  kBudgetExceeded,
  kNonpositiveSigma,
  kDimensionTooLarge,
  kFlatnessTooLarge,
  kMuBelowOne,
  kInsufficientErrors,
  kRankDeficientCode,
  kRandomnessExhausted,
  kInvalidArgument,
  kParse,
  kIo,
  kConfig,
  kMultipleAxes,
};

// Stable short name used in machine-parsable error lines.
const char* error_code_name(ErrorCode code) noexcept;

// True for errors that mean a numeric precondition failed (as opposed to a
// malformed input or configuration).
bool is_numeric_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace lgc
