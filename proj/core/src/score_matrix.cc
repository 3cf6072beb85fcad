// Copyright 2026 The riscore Authors.
// SPDX-License-Identifier: Apache-2.0

#include "riscore/score_matrix.h"

#include <string>
#include <utility>

#include "riscore/error.h"

namespace riscore {

ScoreMatrix::ScoreMatrix(std::size_t n_items, std::size_t n_classes)
    : n_items_(n_items), n_classes_(n_classes),
      values_(n_items * n_classes, 0.0) {}

ScoreMatrix::ScoreMatrix(std::size_t n_items, std::size_t n_classes,
                         std::vector<double> values)
    : n_items_(n_items), n_classes_(n_classes), values_(std::move(values)) {
  if (values_.size() != n_items_ * n_classes_) {
    throw Error(ErrorCode::kShapeMismatch,
                "score matrix expects " + std::to_string(n_items_) + "x" +
                    std::to_string(n_classes_) + " values, got " +
                    std::to_string(values_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    // Negated comparison so NaN is rejected too.
    if (!(values_[i] >= 0.0 && values_[i] <= 1.0)) {
      throw Error(ErrorCode::kOutOfRange,
                  "score at flat index " + std::to_string(i) +
                      " is outside [0, 1]");
    }
  }
}

}  // namespace riscore
