// Copyright 2026 The riscore Authors.
// SPDX-License-Identifier: Apache-2.0

#include "riscore/eval.h"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>
#include <utility>

#include <nlohmann/json.hpp>

#include "riscore/error.h"
#include "riscore/parallel.h"

namespace riscore {
namespace {

constexpr std::size_t kIou50 = 0;
constexpr std::size_t kIou75 = 5;

struct Bucket {
  std::vector<const Detection*> dets;  // evaluation order
  std::vector<Box> gts;
};

ApSummary Summarize(const std::vector<ClassAp>& classes,
                    const std::set<ClassId>* only) {
  ApSummary s;
  for (const auto& c : classes) {
    if (only && !only->contains(c.class_id)) continue;
    s.ap += c.ap;
    s.ap50 += c.ap50;
    s.ap75 += c.ap75;
    ++s.n_classes;
  }
  if (s.n_classes > 0) {
    const double n = static_cast<double>(s.n_classes);
    s.ap /= n;
    s.ap50 /= n;
    s.ap75 /= n;
  }
  return s;
}

nlohmann::json SummaryJson(const ApSummary& s) {
  return {{"ap", s.ap}, {"ap50", s.ap50}, {"ap75", s.ap75},
          {"n_classes", s.n_classes}};
}

}  // namespace

std::array<double, kNumIouThresholds> IouThresholds() {
  std::array<double, kNumIouThresholds> t{};
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = static_cast<double>(50 + 5 * i) / 100.0;
  }
  return t;
}

double Iou(const Box& a, const Box& b) {
  const double iw =
      std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x);
  const double ih =
      std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? std::clamp(inter / uni, 0.0, 1.0) : 0.0;
}

std::vector<bool> MatchDetections(std::span<const Box> detections,
                                  std::span<const Box> ground_truth,
                                  double iou_threshold) {
  std::vector<bool> tp(detections.size(), false);
  std::vector<bool> taken(ground_truth.size(), false);
  for (std::size_t d = 0; d < detections.size(); ++d) {
    double best = -1.0;
    std::size_t best_g = ground_truth.size();
    for (std::size_t g = 0; g < ground_truth.size(); ++g) {
      if (taken[g]) continue;
      double iou = Iou(detections[d], ground_truth[g]);
      if (iou >= iou_threshold && iou > best) {
        best = iou;
        best_g = g;
      }
    }
    if (best_g < ground_truth.size()) {
      taken[best_g] = true;
      tp[d] = true;
    }
  }
  return tp;
}

bool EvaluatedBefore(const Detection& a, const Detection& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.det_id < b.det_id;
}

std::vector<double> InterpolatedPrecision(const std::vector<bool>& tp,
                                          std::size_t n_gt) {
  if (n_gt == 0) {
    throw Error(ErrorCode::kInvalidArgument, "precision needs n_gt > 0");
  }
  const std::size_t n = tp.size();
  std::vector<double> recall(n);
  std::vector<double> precision(n);
  std::size_t tps = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (tp[i]) ++tps;
    recall[i] = static_cast<double>(tps) / static_cast<double>(n_gt);
    precision[i] = static_cast<double>(tps) / static_cast<double>(i + 1);
  }
  for (std::size_t i = n; i-- > 1;) {
    precision[i - 1] = std::max(precision[i - 1], precision[i]);
  }
  std::vector<double> out(kNumRecallPoints, 0.0);
  for (std::size_t r = 0; r < kNumRecallPoints; ++r) {
    const double level = static_cast<double>(r) / 100.0;
    auto it = std::lower_bound(recall.begin(), recall.end(), level);
    if (it != recall.end()) out[r] = precision[it - recall.begin()];
  }
  return out;
}

double AveragePrecision(const std::vector<bool>& tp, std::size_t n_gt) {
  std::vector<double> curve = InterpolatedPrecision(tp, n_gt);
  return std::accumulate(curve.begin(), curve.end(), 0.0) /
         static_cast<double>(kNumRecallPoints);
}

ApReport CocoMap(std::span<const Detection> detections,
                 const AnnotationSet& ground_truth, const EvalOptions& options) {
  const std::set<ImageId> images = ground_truth.image_ids();
  std::map<ClassId, std::size_t> class_slot;
  for (std::size_t c = 0; c < ground_truth.categories.size(); ++c) {
    class_slot.emplace(ground_truth.categories[c].id, c);
  }

  // class slot -> image -> bucket
  std::vector<std::map<ImageId, Bucket>> buckets(ground_truth.categories.size());
  std::vector<std::size_t> n_gt(ground_truth.categories.size(), 0);
  for (const auto& ann : ground_truth.annotations) {
    if (ann.iscrowd) continue;
    auto slot = class_slot.find(ann.class_id);
    if (slot == class_slot.end()) {
      throw Error(ErrorCode::kDanglingReference,
                  "annotation " + std::to_string(ann.id) +
                      " has unknown category");
    }
    buckets[slot->second][ann.image_id].gts.push_back(ann.box);
    ++n_gt[slot->second];
  }
  for (const auto& det : detections) {
    auto slot = class_slot.find(det.class_id);
    if (slot == class_slot.end() || !images.contains(det.image_id)) {
      throw Error(ErrorCode::kDanglingReference,
                  "detection '" + det.det_id + "' refers to image " +
                      std::to_string(det.image_id) + " / category " +
                      std::to_string(det.class_id) +
                      " absent from the ground truth");
    }
    buckets[slot->second][det.image_id].dets.push_back(&det);
  }
  if (std::all_of(n_gt.begin(), n_gt.end(), [](std::size_t n) { return n == 0; })) {
    throw Error(ErrorCode::kNoGroundTruth, "no class has ground truth");
  }

  for (auto& per_image : buckets) {
    for (auto& [img, bucket] : per_image) {
      std::sort(bucket.dets.begin(), bucket.dets.end(),
                [](const Detection* a, const Detection* b) {
                  return EvaluatedBefore(*a, *b);
                });
      if (options.max_dets && bucket.dets.size() > *options.max_dets) {
        bucket.dets.resize(*options.max_dets);
      }
    }
  }

  const auto thresholds = IouThresholds();
  std::vector<std::size_t> evaluated;
  for (std::size_t c = 0; c < n_gt.size(); ++c) {
    if (n_gt[c] > 0) evaluated.push_back(c);
  }
  // curves[e * kNumIouThresholds + t]
  std::vector<std::vector<double>> curves(evaluated.size() * kNumIouThresholds);
  ParallelFor(curves.size(), [&](std::size_t task) {
    const std::size_t slot = evaluated[task / kNumIouThresholds];
    const double thr = thresholds[task % kNumIouThresholds];
    std::vector<std::pair<const Detection*, bool>> labelled;
    for (const auto& [img, bucket] : buckets[slot]) {
      std::vector<Box> boxes;
      boxes.reserve(bucket.dets.size());
      for (const Detection* d : bucket.dets) boxes.push_back(d->box);
      std::vector<bool> tp = MatchDetections(boxes, bucket.gts, thr);
      for (std::size_t i = 0; i < tp.size(); ++i) {
        labelled.emplace_back(bucket.dets[i], tp[i]);
      }
    }
    std::sort(labelled.begin(), labelled.end(), [](const auto& a, const auto& b) {
      return EvaluatedBefore(*a.first, *b.first);
    });
    std::vector<bool> tp;
    tp.reserve(labelled.size());
    for (const auto& [det, is_tp] : labelled) tp.push_back(is_tp);
    curves[task] = InterpolatedPrecision(tp, n_gt[slot]);
  });

  ApReport report;
  for (std::size_t e = 0; e < evaluated.size(); ++e) {
    const Category& cat = ground_truth.categories[evaluated[e]];
    ClassAp row;
    row.class_id = cat.id;
    row.name = cat.name;
    row.n_gt = n_gt[evaluated[e]];
    std::array<double, kNumIouThresholds> ap_at{};
    for (std::size_t t = 0; t < kNumIouThresholds; ++t) {
      auto& curve = curves[e * kNumIouThresholds + t];
      ap_at[t] = std::accumulate(curve.begin(), curve.end(), 0.0) /
                 static_cast<double>(kNumRecallPoints);
      row.pr_curves.push_back(std::move(curve));
    }
    row.ap = std::accumulate(ap_at.begin(), ap_at.end(), 0.0) /
             static_cast<double>(kNumIouThresholds);
    row.ap50 = ap_at[kIou50];
    row.ap75 = ap_at[kIou75];
    report.per_class.push_back(std::move(row));
  }
  report.mean = Summarize(report.per_class, nullptr);
  if (!options.partition.base.empty()) {
    report.base = Summarize(report.per_class, &options.partition.base);
  }
  if (!options.partition.novel.empty()) {
    report.novel = Summarize(report.per_class, &options.partition.novel);
  }
  return report;
}

void WriteReportJson(const ApReport& report, std::ostream& out) {
  nlohmann::json root;
  root["mean"] = SummaryJson(report.mean);
  if (report.base) root["base"] = SummaryJson(*report.base);
  if (report.novel) root["novel"] = SummaryJson(*report.novel);
  const auto thresholds = IouThresholds();
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& c : report.per_class) {
    nlohmann::json curves = nlohmann::json::object();
    for (std::size_t t = 0; t < c.pr_curves.size(); ++t) {
      char key[8];
      std::snprintf(key, sizeof(key), "%.2f", thresholds[t]);
      curves[key] = c.pr_curves[t];
    }
    classes.push_back({{"class_id", c.class_id},
                       {"name", c.name},
                       {"n_gt", c.n_gt},
                       {"ap", c.ap},
                       {"ap50", c.ap50},
                       {"ap75", c.ap75},
                       {"precision_at_recall", std::move(curves)}});
  }
  root["per_class"] = std::move(classes);
  out << root.dump(1) << '\n';
}

void WriteReportCsv(const ApReport& report, std::ostream& out) {
  out << "class_id,ap,ap50\n";
  for (const auto& c : report.per_class) {
    out << c.class_id << ',' << FormatDouble(c.ap) << ','
        << FormatDouble(c.ap50) << '\n';
  }
}

void WriteCompareCsv(const ApReport& a, const ApReport& b, std::ostream& out) {
  out << "scope,ap_a,ap_b,delta_ap,ap50_a,ap50_b,delta_ap50\n";
  auto row = [&out](const std::string& scope, double ap_a, double ap_b,
                    double ap50_a, double ap50_b) {
    out << scope << ',' << FormatDouble(ap_a) << ',' << FormatDouble(ap_b)
        << ',' << FormatDouble(ap_b - ap_a) << ',' << FormatDouble(ap50_a)
        << ',' << FormatDouble(ap50_b) << ',' << FormatDouble(ap50_b - ap50_a)
        << '\n';
  };
  row("mean", a.mean.ap, b.mean.ap, a.mean.ap50, b.mean.ap50);
  if (a.base && b.base) row("base", a.base->ap, b.base->ap, a.base->ap50, b.base->ap50);
  if (a.novel && b.novel) {
    row("novel", a.novel->ap, b.novel->ap, a.novel->ap50, b.novel->ap50);
  }
  std::map<ClassId, const ClassAp*> by_id;
  for (const auto& c : b.per_class) by_id.emplace(c.class_id, &c);
  for (const auto& c : a.per_class) {
    auto it = by_id.find(c.class_id);
    if (it == by_id.end()) continue;
    row(std::to_string(c.class_id), c.ap, it->second->ap, c.ap50,
        it->second->ap50);
  }
}

}  // namespace riscore
