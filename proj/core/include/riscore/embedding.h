// Copyright 2026 The riscore Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Embedding matrices and temperature-scaled image/text similarity.
//
// On disk an embedding matrix is a RISF-EMB file:
//
//   offset  size  field
//   0       4     magic "REMB"
//   4       1     version (1)
//   5       1     normalized flag (0/1)
//   6       2     reserved, zero
//   8       4     rows, little-endian uint32
//   12      4     dim, little-endian uint32
//   16      ...   rows*dim little-endian float32, row-major
//
// plus a sidecar "<path>.idx" holding one UTF-8 key per line.

#ifndef RISCORE_EMBEDDING_H_
#define RISCORE_EMBEDDING_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "riscore/score_matrix.h"

namespace riscore {

inline constexpr std::size_t kEmbeddingHeaderBytes = 16;
inline constexpr std::uint8_t kEmbeddingFormatVersion = 1;

// Rows of float32 vectors, each identified by a unique string key
// (detection id or class name).
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  // Validates shape, key uniqueness and finiteness. dim must be > 0.
  EmbeddingMatrix(std::size_t dim, std::vector<float> data,
                  std::vector<std::string> index, bool normalized = false);

  std::size_t rows() const { return index_.size(); }
  std::size_t dim() const { return dim_; }
  bool empty() const { return index_.empty(); }
  // True when the producer declared the rows unit-normalized.
  bool normalized() const { return normalized_; }

  std::span<const float> row(std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }
  const std::vector<float>& data() const { return data_; }
  const std::vector<std::string>& index() const { return index_; }
  std::optional<std::size_t> find(const std::string& key) const;

  friend bool operator==(const EmbeddingMatrix& a, const EmbeddingMatrix& b);

 private:
  std::size_t dim_ = 0;
  std::vector<float> data_;
  std::vector<std::string> index_;
  std::unordered_map<std::string, std::size_t> lookup_;
  bool normalized_ = false;
};

struct SimilarityParams {
  double tau = 0.01;

  void Validate() const;
};

// L2 norm of one row, accumulated in double.
double RowNorm(std::span<const float> row);

// Scales every row to unit length. Throws kZeroNormRow for rows with norm
// below 1e-12.
EmbeddingMatrix L2Normalize(const EmbeddingMatrix& matrix);

// Reads a RISF-EMB file and its sidecar exactly as stored.
EmbeddingMatrix LoadEmbeddings(const std::filesystem::path& path);

// LoadEmbeddings followed by L2Normalize when the file's normalized flag
// is not set.
EmbeddingMatrix LoadNormalizedEmbeddings(const std::filesystem::path& path);

void SaveEmbeddings(const EmbeddingMatrix& matrix,
                    const std::filesystem::path& path);

std::filesystem::path SidecarPath(const std::filesystem::path& path);

// Row i, column k is softmax_k(<image_i, text_k> / tau). Both inputs must
// be unit-normalized within 1e-4. An empty image matrix gives an empty
// result with text.rows() columns.
ScoreMatrix SimilarityScores(const EmbeddingMatrix& image,
                             const EmbeddingMatrix& text,
                             const SimilarityParams& params = {});

}  // namespace riscore

#endif  // RISCORE_EMBEDDING_H_
