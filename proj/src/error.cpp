// Copyright 2026 The lgc Authors
// SPDX-License-Identifier: Apache-2.0

#include "lgc/error.hpp"

namespace lgc {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kNotSquare: return "NotSquare";
    case ErrorCode::kSingularBasis: return "SingularBasis";
    case ErrorCode::kUnknownName: return "UnknownName";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kBudgetExceeded: return "BudgetExceeded";
    case ErrorCode::kNonpositiveSigma: return "NonpositiveSigma";
    case ErrorCode::kDimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::kFlatnessTooLarge: return "FlatnessTooLarge";
    case ErrorCode::kMuBelowOne: return "MuBelowOne";
    case ErrorCode::kInsufficientErrors: return "InsufficientErrors";
    case ErrorCode::kRankDeficientCode: return "RankDeficientCode";
    case ErrorCode::kRandomnessExhausted: return "RandomnessExhausted";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kParse: return "Parse";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kConfig: return "Config";
    case ErrorCode::kMultipleAxes: return "MultipleAxes";
  }
  return "Unknown";
}

bool is_numeric_error(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kSingularBasis:
    case ErrorCode::kBudgetExceeded:
    case ErrorCode::kNonpositiveSigma:
    case ErrorCode::kDimensionTooLarge:
    case ErrorCode::kFlatnessTooLarge:
    case ErrorCode::kMuBelowOne:
    case ErrorCode::kInsufficientErrors:
    case ErrorCode::kRankDeficientCode:
    case ErrorCode::kRandomnessExhausted:
      return true;
    default:
      return false;
  }
}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace lgc
