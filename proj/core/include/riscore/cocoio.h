// Copyright 2026 The riscore Authors.
// SPDX-License-Identifier: Apache-2.0
//
// COCO annotation/results files, k-shot subset sampling and
// missing-annotation statistics.

#ifndef RISCORE_COCOIO_H_
#define RISCORE_COCOIO_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "riscore/types.h"

namespace riscore {

using AnnotationId = std::int64_t;

struct ImageInfo {
  ImageId id = 0;
  int width = 0;
  int height = 0;
  std::string file_name;

  friend bool operator==(const ImageInfo&, const ImageInfo&) = default;
};

struct Annotation {
  AnnotationId id = 0;
  ImageId image_id = 0;
  ClassId class_id = 0;
  Box box;
  bool iscrowd = false;

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

struct AnnotationSet {
  std::vector<ImageInfo> images;
  std::vector<Category> categories;
  std::vector<Annotation> annotations;

  // Throws kDanglingReference / kParseError on broken references,
  // duplicate ids or degenerate boxes.
  void Validate() const;

  const Category* find_category(ClassId id) const;
  std::set<ImageId> image_ids() const;
};

AnnotationSet ParseAnnotations(const std::filesystem::path& path);
AnnotationSet ParseAnnotationsText(std::string_view text,
                                   std::string_view source = "<memory>");
std::string SerializeAnnotations(const AnnotationSet& set);

// Category ids tagged "base"/"novel" by their "split" attribute.
struct ClassPartition {
  std::set<ClassId> base;
  std::set<ClassId> novel;

  bool empty() const { return base.empty() && novel.empty(); }
};
ClassPartition PartitionFromCategories(std::span<const Category> categories);

// COCO results: array of {image_id, category_id, bbox, score}, optionally
// with "det_id" and "score_vector". Detections without a det_id get their
// array position as id.
std::vector<Detection> ParseResults(const std::filesystem::path& path);
std::vector<Detection> ParseResultsText(std::string_view text,
                                        std::string_view source = "<memory>");
std::string SerializeResults(std::span<const Detection> detections);

struct KShotSeed {
  std::size_t k = 0;
  std::uint64_t rng_seed = 0;
  AnnotationSet subset;
  // class id -> sampled annotation ids, in sampling order.
  std::map<ClassId, std::vector<AnnotationId>> provenance;
};

// Per class: shuffle the images holding non-crowd instances of the class
// and take whole images (only that class's instances) until at least k
// instances are collected. Deterministic for a given rng_seed on every
// platform.
KShotSeed SampleKShot(const AnnotationSet& full, std::size_t k,
                      std::span<const ClassId> classes,
                      std::uint64_t rng_seed);

// COCO annotation JSON of the subset plus a top-level "provenance" key.
std::string SerializeSeed(const KShotSeed& seed);

struct ImageMissing {
  ImageId image_id = 0;
  std::size_t full = 0;
  std::size_t kept = 0;
  std::size_t missing = 0;
};

struct MissingStats {
  // Every category of the full set appears, possibly with zero.
  std::map<ClassId, std::size_t> per_class;
  std::vector<ImageMissing> per_image;
};

// Non-crowd annotations of the full set that sit on a subset image but are
// absent from the subset.
MissingStats MissingAnnotationStats(const AnnotationSet& full,
                                    const AnnotationSet& subset);

struct ConfidenceInterval {
  double mean = 0.0;
  double low = 0.0;
  double high = 0.0;
};

// Mean with a two-sided 95% Student-t interval; needs at least 2 values.
ConfidenceInterval AggregateCi(std::span<const double> values);

// "class_id,class_name,missing_count"
void WriteMissingCsv(const MissingStats& stats,
                     std::span<const Category> categories, std::ostream& out);

// "class_id,mean,ci_low,ci_high"
void WriteAggregateCsv(const std::map<ClassId, ConfidenceInterval>& rows,
                       std::ostream& out);

std::string FormatDouble(double value);

}  // namespace riscore

#endif  // RISCORE_COCOIO_H_
