// Copyright 2026 The riscore Authors.
// SPDX-License-Identifier: Apache-2.0

#include "riscore/rescore.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "riscore/error.h"

namespace riscore {

void FusionParams::Validate() const {
  if (!(c >= 0.0 && c <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "fusion weight c must be in [0, 1]");
  }
  if (skip_base && base_class_ids.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "skip_base requires at least one base class id");
  }
}

double FuseScalar(double s_f, double s_m, double c) {
  double fused = c * s_f + (1.0 - c) * s_m;
  return std::clamp(fused, std::min(s_f, s_m), std::max(s_f, s_m));
}

ScoreMatrix FuseScores(const ScoreMatrix& s_f, const ScoreMatrix& s_m,
                       const FusionParams& params,
                       std::span<const ClassId> column_class_ids) {
  params.Validate();
  if (s_f.n_items() != s_m.n_items() || s_f.n_classes() != s_m.n_classes()) {
    throw Error(ErrorCode::kShapeMismatch,
                "detector scores " + std::to_string(s_f.n_items()) + "x" +
                    std::to_string(s_f.n_classes()) + " vs similarity scores " +
                    std::to_string(s_m.n_items()) + "x" +
                    std::to_string(s_m.n_classes()));
  }
  if (!column_class_ids.empty() && column_class_ids.size() != s_f.n_classes()) {
    throw Error(ErrorCode::kShapeMismatch,
                "column class ids do not match class count");
  }

  std::vector<bool> skip(s_f.n_classes(), false);
  if (params.skip_base) {
    for (std::size_t k = 0; k < skip.size(); ++k) {
      ClassId id = column_class_ids.empty() ? static_cast<ClassId>(k)
                                            : column_class_ids[k];
      skip[k] = params.base_class_ids.contains(id);
    }
  }

  ScoreMatrix out(s_f.n_items(), s_f.n_classes());
  for (std::size_t i = 0; i < s_f.n_items(); ++i) {
    for (std::size_t k = 0; k < s_f.n_classes(); ++k) {
      out.at(i, k) = skip[k] ? s_f.at(i, k)
                             : FuseScalar(s_f.at(i, k), s_m.at(i, k), params.c);
    }
  }
  return out;
}

ClassMap::ClassMap(std::vector<Category> categories)
    : categories_(std::move(categories)) {
  for (std::size_t k = 0; k < categories_.size(); ++k) {
    const Category& cat = categories_[k];
    if (!by_id_.emplace(cat.id, k).second) {
      throw Error(ErrorCode::kDuplicateKey,
                  "duplicate class id " + std::to_string(cat.id));
    }
    if (!by_name_.emplace(cat.name, k).second) {
      throw Error(ErrorCode::kDuplicateKey,
                  "duplicate class name '" + cat.name + "'");
    }
  }
}

std::vector<ClassId> ClassMap::ids() const {
  std::vector<ClassId> out;
  out.reserve(categories_.size());
  for (const auto& cat : categories_) out.push_back(cat.id);
  return out;
}

std::optional<std::size_t> ClassMap::column_of(ClassId id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> ClassMap::column_of(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

namespace {

// Text rows rearranged into class-map column order.
EmbeddingMatrix AlignTextRows(const EmbeddingMatrix& text,
                              const ClassMap& class_map) {
  for (const auto& key : text.index()) {
    if (!class_map.column_of(key)) {
      throw Error(ErrorCode::kUnknownClassKey,
                  "text embedding key '" + key + "' is not a known class");
    }
  }
  std::vector<float> data;
  std::vector<std::string> keys;
  data.reserve(class_map.size() * text.dim());
  for (const auto& cat : class_map.categories()) {
    auto row = text.find(cat.name);
    if (!row) {
      throw Error(ErrorCode::kUnknownClassKey,
                  "class '" + cat.name + "' has no text embedding");
    }
    auto values = text.row(*row);
    data.insert(data.end(), values.begin(), values.end());
    keys.push_back(cat.name);
  }
  return EmbeddingMatrix(text.dim(), std::move(data), std::move(keys),
                         text.normalized());
}

}  // namespace

RescoreResult RescoreDetections(std::span<const Detection> detections,
                                const EmbeddingMatrix& det_embs,
                                const EmbeddingMatrix& text_embs,
                                const ClassMap& class_map,
                                const SimilarityParams& sim,
                                const FusionParams& fusion) {
  sim.Validate();
  fusion.Validate();
  if (!det_embs.empty() && !text_embs.empty() &&
      det_embs.dim() != text_embs.dim()) {
    throw Error(ErrorCode::kEmbeddingDimMismatch,
                "detection embeddings have dim " +
                    std::to_string(det_embs.dim()) + ", text embeddings " +
                    std::to_string(text_embs.dim()));
  }
  const EmbeddingMatrix text = AlignTextRows(text_embs, class_map);
  const std::size_t n_classes = class_map.size();
  const std::vector<ClassId> column_ids = class_map.ids();

  // Gather the embedding rows of detections that have one.
  std::vector<std::size_t> sim_row(detections.size(), 0);
  std::vector<bool> has_emb(detections.size(), false);
  std::vector<float> gathered;
  std::vector<std::string> gathered_keys;
  for (std::size_t d = 0; d < detections.size(); ++d) {
    const Detection& det = detections[d];
    if (!class_map.column_of(det.class_id)) {
      throw Error(ErrorCode::kUnknownClassKey,
                  "detection '" + det.det_id + "' has unknown class id " +
                      std::to_string(det.class_id));
    }
    auto row = det_embs.find(det.det_id);
    if (!row) continue;
    has_emb[d] = true;
    sim_row[d] = gathered_keys.size();
    auto values = det_embs.row(*row);
    gathered.insert(gathered.end(), values.begin(), values.end());
    gathered_keys.push_back(det.det_id);
  }
  ScoreMatrix s_m(0, n_classes);
  if (!gathered_keys.empty()) {
    EmbeddingMatrix image(det_embs.dim(), std::move(gathered),
                          std::move(gathered_keys), det_embs.normalized());
    s_m = SimilarityScores(image, text, sim);
  }

  RescoreResult result;
  result.detections.reserve(detections.size());
  for (std::size_t d = 0; d < detections.size(); ++d) {
    Detection out = detections[d];
    out.score_raw = out.score;
    if (!has_emb[d]) {
      ++result.passed_through;
      result.detections.push_back(std::move(out));
      continue;
    }
    const std::size_t col = *class_map.column_of(out.class_id);
    const auto s_m_row = s_m.row(sim_row[d]);
    if (out.score_vector) {
      if (out.score_vector->size() != n_classes) {
        throw Error(ErrorCode::kShapeMismatch,
                    "detection '" + out.det_id + "' has " +
                        std::to_string(out.score_vector->size()) +
                        " scores for " + std::to_string(n_classes) +
                        " classes");
      }
      ScoreMatrix s_f(1, n_classes, *out.score_vector);
      ScoreMatrix one_m(1, n_classes,
                        std::vector<double>(s_m_row.begin(), s_m_row.end()));
      ScoreMatrix fused = FuseScores(s_f, one_m, fusion, column_ids);
      out.score_vector = fused.values();
      out.score = fused.at(0, col);
    } else {
      const bool skip = fusion.skip_base && fusion.base_class_ids.contains(out.class_id);
      if (!skip) out.score = FuseScalar(out.score, s_m_row[col], fusion.c);
    }
    ++result.rescored;
    result.detections.push_back(std::move(out));
  }
  return result;
}

}  // namespace riscore
