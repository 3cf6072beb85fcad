// Copyright 2026 The riscore Authors.
// SPDX-License-Identifier: Apache-2.0
//
// COCO-style box evaluation: greedy IoU matching, 101-point interpolated
// AP, averaged over IoU thresholds 0.50:0.05:0.95.

#ifndef RISCORE_EVAL_H_
#define RISCORE_EVAL_H_

#include <array>
#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "riscore/cocoio.h"
#include "riscore/types.h"

namespace riscore {

inline constexpr std::size_t kNumIouThresholds = 10;
inline constexpr std::size_t kNumRecallPoints = 101;

// 0.50, 0.55, ..., 0.95
std::array<double, kNumIouThresholds> IouThresholds();

double Iou(const Box& a, const Box& b);

// Greedy one-to-one matching for one (image, class) bucket. Detections must
// already be in evaluation order (descending score). Each detection takes
// the unmatched ground truth with the highest IoU >= iou_threshold, the
// earliest one on ties. Returns true for matched (TP) detections.
std::vector<bool> MatchDetections(std::span<const Box> detections,
                                  std::span<const Box> ground_truth,
                                  double iou_threshold);

// Evaluation order: descending score, ties by ascending det_id.
bool EvaluatedBefore(const Detection& a, const Detection& b);

// Right-to-left precision envelope sampled at recall 0.00, 0.01, ..., 1.00.
// Recall levels beyond the final recall read as 0.
std::vector<double> InterpolatedPrecision(const std::vector<bool>& tp,
                                          std::size_t n_gt);

// Mean of InterpolatedPrecision. n_gt must be positive.
double AveragePrecision(const std::vector<bool>& tp, std::size_t n_gt);

struct EvalOptions {
  // Per (image, class) cap on evaluated detections; unlimited when unset.
  std::optional<std::size_t> max_dets;
  ClassPartition partition;
};

struct ClassAp {
  ClassId class_id = 0;
  std::string name;
  std::size_t n_gt = 0;
  double ap = 0.0;    // mean over IoU thresholds
  double ap50 = 0.0;
  double ap75 = 0.0;
  // pr_curves[t] holds the interpolated precision at threshold t.
  std::vector<std::vector<double>> pr_curves;
};

struct ApSummary {
  double ap = 0.0;
  double ap50 = 0.0;
  double ap75 = 0.0;
  std::size_t n_classes = 0;
};

struct ApReport {
  // Only classes with at least one ground-truth instance, in category order.
  std::vector<ClassAp> per_class;
  ApSummary mean;
  std::optional<ApSummary> base;
  std::optional<ApSummary> novel;
};

// Crowd ground truth is ignored. Throws kNoGroundTruth when no class has
// ground truth and kDanglingReference for detections on unknown images or
// categories.
ApReport CocoMap(std::span<const Detection> detections,
                 const AnnotationSet& ground_truth,
                 const EvalOptions& options = {});

void WriteReportJson(const ApReport& report, std::ostream& out);
// "class_id,ap,ap50"
void WriteReportCsv(const ApReport& report, std::ostream& out);
// Row per scope (mean/base/novel) and per class; deltas are b - a.
void WriteCompareCsv(const ApReport& a, const ApReport& b, std::ostream& out);

}  // namespace riscore

#endif  // RISCORE_EVAL_H_
