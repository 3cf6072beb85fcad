// Copyright 2026 The riscore Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Late fusion of detector class scores with image/text similarity scores:
//
//   S = c * s_detector + (1 - c) * s_similarity
//
// optionally leaving base classes at the detector score.

#ifndef RISCORE_RESCORE_H_
#define RISCORE_RESCORE_H_

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "riscore/embedding.h"
#include "riscore/score_matrix.h"
#include "riscore/types.h"

namespace riscore {

struct FusionParams {
  double c = 0.7;
  bool skip_base = false;
  std::set<ClassId> base_class_ids;

  void Validate() const;
};

// Fuses one pair of scores. The result is clamped to [min, max] of the
// inputs so rounding never leaves the convex hull.
double FuseScalar(double s_f, double s_m, double c);

// Elementwise fusion. column_class_ids[k] names the class of column k; when
// empty, column k is class id k. With skip_base, base columns are copied
// from s_f unchanged.
ScoreMatrix FuseScores(const ScoreMatrix& s_f, const ScoreMatrix& s_m,
                       const FusionParams& params,
                       std::span<const ClassId> column_class_ids = {});

// Ordered bijection between class names and ids. Column k of every score
// vector refers to entry k.
class ClassMap {
 public:
  ClassMap() = default;
  explicit ClassMap(std::vector<Category> categories);

  std::size_t size() const { return categories_.size(); }
  const std::vector<Category>& categories() const { return categories_; }
  std::vector<ClassId> ids() const;
  std::optional<std::size_t> column_of(ClassId id) const;
  std::optional<std::size_t> column_of(const std::string& name) const;

 private:
  std::vector<Category> categories_;
  std::unordered_map<ClassId, std::size_t> by_id_;
  std::unordered_map<std::string, std::size_t> by_name_;
};

struct RescoreResult {
  std::vector<Detection> detections;
  std::size_t rescored = 0;
  // Detections without an embedding row, returned unchanged apart from
  // score_raw.
  std::size_t passed_through = 0;
};

// Re-scores each detection against its embedding row (looked up by det_id).
// Class labels, boxes and ids are never modified. Text embeddings must be
// keyed by exactly the class names in class_map.
RescoreResult RescoreDetections(std::span<const Detection> detections,
                                const EmbeddingMatrix& det_embs,
                                const EmbeddingMatrix& text_embs,
                                const ClassMap& class_map,
                                const SimilarityParams& sim,
                                const FusionParams& fusion);

}  // namespace riscore

#endif  // RISCORE_RESCORE_H_
