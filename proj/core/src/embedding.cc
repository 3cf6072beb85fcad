// Copyright 2026 The riscore Authors.
// SPDX-License-Identifier: Apache-2.0

#include "riscore/embedding.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>
#include <utility>

#include "riscore/error.h"

namespace riscore {
namespace {

constexpr char kMagic[4] = {'R', 'E', 'M', 'B'};
constexpr double kZeroNorm = 1e-12;
constexpr double kNormTolerance = 1e-4;

void PutU32(std::string& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) {
    out.push_back(static_cast<char>((v >> shift) & 0xffu));
  }
}

std::uint32_t GetU32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::string> ReadIndex(const std::filesystem::path& path) {
  std::string text = ReadFile(path);
  std::vector<std::string> keys;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    keys.emplace_back(text.substr(start, end - start));
    start = end + 1;
  }
  return keys;
}

}  // namespace

EmbeddingMatrix::EmbeddingMatrix(std::size_t dim, std::vector<float> data,
                                 std::vector<std::string> index,
                                 bool normalized)
    : dim_(dim), data_(std::move(data)), index_(std::move(index)),
      normalized_(normalized) {
  if (dim_ == 0) {
    throw Error(ErrorCode::kDimMismatch, "embedding dim must be positive");
  }
  if (data_.size() != index_.size() * dim_) {
    throw Error(ErrorCode::kIndexLengthMismatch,
                std::to_string(index_.size()) + " keys for " +
                    std::to_string(data_.size()) + " values of dim " +
                    std::to_string(dim_));
  }
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) {
      throw Error(ErrorCode::kNonFinite,
                  "non-finite value in row " + std::to_string(i / dim_));
    }
  }
  lookup_.reserve(index_.size());
  for (std::size_t i = 0; i < index_.size(); ++i) {
    const std::string& key = index_[i];
    if (key.empty() || key.find('\n') != std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument,
                  "row " + std::to_string(i) + " has an empty or multi-line key");
    }
    if (!lookup_.emplace(key, i).second) {
      throw Error(ErrorCode::kDuplicateKey, "duplicate key '" + key + "'");
    }
  }
}

std::optional<std::size_t> EmbeddingMatrix::find(const std::string& key) const {
  auto it = lookup_.find(key);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

bool operator==(const EmbeddingMatrix& a, const EmbeddingMatrix& b) {
  if (a.dim_ != b.dim_ || a.normalized_ != b.normalized_ ||
      a.index_ != b.index_ || a.data_.size() != b.data_.size()) {
    return false;
  }
  // Bitwise so that -0.0f and 0.0f are told apart.
  return std::memcmp(a.data_.data(), b.data_.data(),
                     a.data_.size() * sizeof(float)) == 0;
}

void SimilarityParams::Validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw Error(ErrorCode::kInvalidArgument, "tau must be positive and finite");
  }
}

double RowNorm(std::span<const float> row) {
  double sum = 0.0;
  for (float v : row) sum += static_cast<double>(v) * static_cast<double>(v);
  return std::sqrt(sum);
}

EmbeddingMatrix L2Normalize(const EmbeddingMatrix& matrix) {
  std::vector<float> out(matrix.data().size());
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    auto row = matrix.row(i);
    double norm = RowNorm(row);
    if (norm < kZeroNorm) {
      throw Error(ErrorCode::kZeroNormRow,
                  "row " + std::to_string(i) + " ('" + matrix.index()[i] +
                      "') has zero norm");
    }
    for (std::size_t j = 0; j < row.size(); ++j) {
      out[i * matrix.dim() + j] =
          static_cast<float>(static_cast<double>(row[j]) / norm);
    }
  }
  return EmbeddingMatrix(matrix.dim(), std::move(out), matrix.index(),
                         /*normalized=*/true);
}

std::filesystem::path SidecarPath(const std::filesystem::path& path) {
  std::filesystem::path sidecar = path;
  sidecar += ".idx";
  return sidecar;
}

EmbeddingMatrix LoadEmbeddings(const std::filesystem::path& path) {
  const std::string bytes = ReadFile(path);
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  if (bytes.size() < kEmbeddingHeaderBytes ||
      std::memcmp(p, kMagic, sizeof(kMagic)) != 0) {
    throw Error(ErrorCode::kBadMagic,
                path.string() + " is not a RISF-EMB file");
  }
  if (p[4] != kEmbeddingFormatVersion) {
    throw Error(ErrorCode::kBadMagic, path.string() +
                                          ": unsupported version " +
                                          std::to_string(p[4]));
  }
  if (p[5] > 1) {
    throw Error(ErrorCode::kBadMagic,
                path.string() + ": normalized flag must be 0 or 1");
  }
  const bool normalized = p[5] == 1;
  const std::uint64_t rows = GetU32(p + 8);
  const std::uint64_t dim = GetU32(p + 12);
  if (dim == 0) {
    throw Error(ErrorCode::kDimMismatch, path.string() + ": dim is zero");
  }
  const std::uint64_t payload = rows * dim * sizeof(float);
  const std::uint64_t available = bytes.size() - kEmbeddingHeaderBytes;
  if (available < payload) {
    throw Error(ErrorCode::kTruncatedPayload,
                path.string() + ": header declares " + std::to_string(rows) +
                    "x" + std::to_string(dim) + " floats but only " +
                    std::to_string(available) + " payload bytes present");
  }
  if (available > payload) {
    throw Error(ErrorCode::kDimMismatch,
                path.string() + ": " + std::to_string(available - payload) +
                    " trailing bytes after declared payload");
  }

  std::vector<float> data(rows * dim);
  const unsigned char* q = p + kEmbeddingHeaderBytes;
  for (std::size_t i = 0; i < data.size(); ++i, q += 4) {
    data[i] = std::bit_cast<float>(GetU32(q));
  }

  std::vector<std::string> index = ReadIndex(SidecarPath(path));
  if (index.size() != rows) {
    throw Error(ErrorCode::kIndexLengthMismatch,
                SidecarPath(path).string() + " has " +
                    std::to_string(index.size()) + " keys, header declares " +
                    std::to_string(rows) + " rows");
  }
  return EmbeddingMatrix(dim, std::move(data), std::move(index), normalized);
}

EmbeddingMatrix LoadNormalizedEmbeddings(const std::filesystem::path& path) {
  EmbeddingMatrix m = LoadEmbeddings(path);
  if (m.normalized()) return m;
  return L2Normalize(m);
}

void SaveEmbeddings(const EmbeddingMatrix& matrix,
                    const std::filesystem::path& path) {
  if (matrix.rows() > std::numeric_limits<std::uint32_t>::max() ||
      matrix.dim() > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::kInvalidArgument, "matrix too large for RISF-EMB");
  }
  std::string bytes(kMagic, sizeof(kMagic));
  bytes.push_back(static_cast<char>(kEmbeddingFormatVersion));
  bytes.push_back(static_cast<char>(matrix.normalized() ? 1 : 0));
  bytes.push_back('\0');
  bytes.push_back('\0');
  PutU32(bytes, static_cast<std::uint32_t>(matrix.rows()));
  PutU32(bytes, static_cast<std::uint32_t>(matrix.dim()));
  bytes.reserve(bytes.size() + matrix.data().size() * sizeof(float));
  for (float v : matrix.data()) PutU32(bytes, std::bit_cast<std::uint32_t>(v));

  std::string index;
  for (const auto& key : matrix.index()) {
    index += key;
    index += '\n';
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  std::ofstream side(SidecarPath(path), std::ios::binary | std::ios::trunc);
  side.write(index.data(), static_cast<std::streamsize>(index.size()));
  out.close();
  side.close();
  if (!out || !side) {
    throw Error(ErrorCode::kIoFailure, "failed to write " + path.string());
  }
}

ScoreMatrix SimilarityScores(const EmbeddingMatrix& image,
                             const EmbeddingMatrix& text,
                             const SimilarityParams& params) {
  params.Validate();
  if (image.empty()) return ScoreMatrix(0, text.rows());
  if (image.dim() != text.dim()) {
    throw Error(ErrorCode::kDimMismatch,
                "image dim " + std::to_string(image.dim()) + " vs text dim " +
                    std::to_string(text.dim()));
  }
  if (text.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no text embeddings");
  }
  auto check_norms = [](const EmbeddingMatrix& m, const char* what) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (std::abs(RowNorm(m.row(i)) - 1.0) > kNormTolerance) {
        throw Error(ErrorCode::kNonNormalizedInput,
                    std::string(what) + " row " + std::to_string(i) + " ('" +
                        m.index()[i] + "') is not unit-norm");
      }
    }
  };
  check_norms(image, "image");
  check_norms(text, "text");

  const std::size_t n_classes = text.rows();
  std::vector<double> values(image.rows() * n_classes);
  std::vector<double> logits(n_classes);
  for (std::size_t i = 0; i < image.rows(); ++i) {
    auto img = image.row(i);
    double max_logit = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n_classes; ++k) {
      auto txt = text.row(k);
      double dot = 0.0;
      for (std::size_t j = 0; j < img.size(); ++j) {
        dot += static_cast<double>(img[j]) * static_cast<double>(txt[j]);
      }
      logits[k] = dot / params.tau;
      max_logit = std::max(max_logit, logits[k]);
    }
    double total = 0.0;
    for (double& z : logits) {
      z = std::exp(z - max_logit);
      total += z;
    }
    double* out = values.data() + i * n_classes;
    for (std::size_t k = 0; k < n_classes; ++k) out[k] = logits[k] / total;
  }
  return ScoreMatrix(image.rows(), n_classes, std::move(values));
}

}  // namespace riscore
