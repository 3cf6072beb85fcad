// Copyright 2026 The riscore Authors.
// SPDX-License-Identifier: Apache-2.0

#include "riscore/error.h"

namespace riscore {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kZeroNormRow: return "ZeroNormRow";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kDimMismatch: return "DimMismatch";
    case ErrorCode::kIndexLengthMismatch: return "IndexLengthMismatch";
    case ErrorCode::kTruncatedPayload: return "TruncatedPayload";
    case ErrorCode::kDuplicateKey: return "DuplicateKey";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kNonNormalizedInput: return "NonNormalizedInput";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kUnknownClassKey: return "UnknownClassKey";
    case ErrorCode::kEmbeddingDimMismatch: return "EmbeddingDimMismatch";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kDanglingReference: return "DanglingReference";
    case ErrorCode::kInsufficientInstances: return "InsufficientInstances";
    case ErrorCode::kSubsetNotContained: return "SubsetNotContained";
    case ErrorCode::kTooFewSamples: return "TooFewSamples";
    case ErrorCode::kNoGroundTruth: return "NoGroundTruth";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + detail),
      code_(code) {}

}  // namespace riscore
