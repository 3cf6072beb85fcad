// Copyright 2026 The riscore Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef RISCORE_TYPES_H_
#define RISCORE_TYPES_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace riscore {

using ImageId = std::int64_t;
using ClassId = int;

// Axis-aligned box in pixels, COCO layout (top-left corner, width, height).
struct Box {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double area() const { return w * h; }
  friend bool operator==(const Box&, const Box&) = default;
};

struct Category {
  ClassId id = 0;
  std::string name;
  // Optional partition tag carried in the annotation file ("base"/"novel").
  std::string split;

  friend bool operator==(const Category&, const Category&) = default;
};

struct Detection {
  ImageId image_id = 0;
  std::string det_id;
  ClassId class_id = 0;
  Box box;
  double score = 0.0;
  // Per-class probabilities, columns in ClassMap order.
  std::optional<std::vector<double>> score_vector;
  // Pre-fusion score, filled by rescoring.
  std::optional<double> score_raw;
  // Unrecognised fields of the source JSON object, key -> serialized value.
  std::map<std::string, std::string> extra;

  friend bool operator==(const Detection&, const Detection&) = default;
};

}  // namespace riscore

#endif  // RISCORE_TYPES_H_
