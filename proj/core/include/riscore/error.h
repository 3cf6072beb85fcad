// Copyright 2026 The riscore Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef RISCORE_ERROR_H_
#define RISCORE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace riscore {

enum class ErrorCode {
  kInvalidArgument,
  kIoFailure,
  // embedding
  kZeroNormRow,
  kBadMagic,
  kDimMismatch,
  kIndexLengthMismatch,
  kTruncatedPayload,
  kDuplicateKey,
  kNonFinite,
  kNonNormalizedInput,
  // rescore
  kShapeMismatch,
  kUnknownClassKey,
  kEmbeddingDimMismatch,
  // bnrl
  kOutOfRange,
  // cocoio
  kParseError,
  kDanglingReference,
  kInsufficientInstances,
  kSubsetNotContained,
  kTooFewSamples,
  // eval
  kNoGroundTruth,
};

// Stable name used in messages, e.g. "BadMagic".
std::string_view ErrorCodeName(ErrorCode code);

// All data errors raised by the library. The message is prefixed with the
// code name so CLI output stays greppable.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace riscore

#endif  // RISCORE_ERROR_H_
