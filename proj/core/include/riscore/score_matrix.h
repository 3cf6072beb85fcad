// Copyright 2026 The riscore Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef RISCORE_SCORE_MATRIX_H_
#define RISCORE_SCORE_MATRIX_H_

#include <cstddef>
#include <span>
#include <vector>

namespace riscore {

// Row-major items x classes probabilities. Used for detector scores,
// similarity scores and fused scores alike.
class ScoreMatrix {
 public:
  ScoreMatrix() = default;
  ScoreMatrix(std::size_t n_items, std::size_t n_classes);
  // Throws kShapeMismatch if values.size() != n_items * n_classes and
  // kOutOfRange if any entry lies outside [0, 1].
  ScoreMatrix(std::size_t n_items, std::size_t n_classes,
              std::vector<double> values);

  std::size_t n_items() const { return n_items_; }
  std::size_t n_classes() const { return n_classes_; }
  bool empty() const { return n_items_ == 0; }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * n_classes_, n_classes_};
  }
  std::span<double> row(std::size_t i) {
    return {values_.data() + i * n_classes_, n_classes_};
  }
  double at(std::size_t i, std::size_t k) const {
    return values_[i * n_classes_ + k];
  }
  double& at(std::size_t i, std::size_t k) {
    return values_[i * n_classes_ + k];
  }
  const std::vector<double>& values() const { return values_; }

  friend bool operator==(const ScoreMatrix&, const ScoreMatrix&) = default;

 private:
  std::size_t n_items_ = 0;
  std::size_t n_classes_ = 0;
  std::vector<double> values_;
};

}  // namespace riscore

#endif  // RISCORE_SCORE_MATRIX_H_
