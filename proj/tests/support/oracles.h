// Copyright 2026 The riscore Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Test-only reference implementations. Kept deliberately naive and written
// without calling into the library's numerical code paths.

#ifndef RISCORE_TESTS_SUPPORT_ORACLES_H_
#define RISCORE_TESTS_SUPPORT_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace riscore::oracle {

// Two-sided 95% Student-t quantiles t_{0.975, dof}, dof = 1..30. Root of the
// regularized incomplete beta CDF solved at 40 digits with mpmath.
inline double StudentT975(std::size_t dof) {
  static const double kTable[] = {
      12.706204736174705, 4.302652729749464, 3.1824463052837095,
      2.7764451051977943, 2.5705818356363155, 2.44691185114497,
      2.3646242515927853, 2.3060041352041667, 2.2621571627982053,
      2.228138851986275, 2.2009851600916397, 2.178812829667229,
      2.1603686564627926, 2.144786687917804, 2.1314495455597755,
      2.1199052992212546, 2.109815577833317, 2.1009220402410387,
      2.0930240544083096, 2.085963447265865, 2.0796138447276804,
      2.0738730679040263, 2.0686576104190486, 2.063898561628026,
      2.0595385527532977, 2.055529438642873, 2.0518305164802855,
      2.048407141795245, 2.0452296421327043, 2.042272456301238};
  if (dof == 0 || dof > 30) throw std::out_of_range("t table covers dof 1..30");
  return kTable[dof - 1];
}

struct Interval {
  double mean, low, high;
};

// Two-pass mean / sample standard deviation, then mean +- t * s / sqrt(n).
inline Interval StudentInterval(const std::vector<double>& v) {
  long double sum = 0;
  for (double x : v) sum += x;
  const long double n = static_cast<long double>(v.size());
  const long double mean = sum / n;
  long double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const long double half =
      StudentT975(v.size() - 1) * std::sqrt(ss / (n - 1)) / std::sqrt(n);
  return {static_cast<double>(mean), static_cast<double>(mean - half),
          static_cast<double>(mean + half)};
}

// One class term of the loss in extended precision, straight from the
// formula (no clamping; callers keep p inside (0,1)).
inline long double LossTerm(long double p, bool is_gt, long double beta,
                            long double gamma, long double epsilon) {
  if (is_gt) return -beta * std::pow(1.0L - p, gamma) * std::log(p);
  return -(1.0L - beta) * std::pow(p, epsilon) * std::log(1.0L - p);
}

struct OracleDet {
  long image;
  int cls;
  double x0, y0, x1, y1;  // corners
  double score;
  std::string id;
};

struct OracleGt {
  long image;
  int cls;
  double x0, y0, x1, y1;
};

inline double CornerIou(double ax0, double ay0, double ax1, double ay1,
                        double bx0, double by0, double bx1, double by1) {
  double w = std::max(0.0, std::min(ax1, bx1) - std::max(ax0, bx0));
  double h = std::max(0.0, std::min(ay1, by1) - std::max(ay0, by0));
  double inter = w * h;
  double uni = (ax1 - ax0) * (ay1 - ay0) + (bx1 - bx0) * (by1 - by0) - inter;
  return uni > 0 ? inter / uni : 0.0;
}

// Greedy matching by exhaustive scan over all ground truth of the same
// image/class. Detections given in any order; returns TP flags in the
// order of `order` (indices into dets).
inline std::vector<bool> GreedyLabels(const std::vector<OracleDet>& dets,
                                      const std::vector<std::size_t>& order,
                                      const std::vector<OracleGt>& gts,
                                      double thr) {
  std::vector<bool> used(gts.size(), false);
  std::vector<bool> out;
  for (std::size_t idx : order) {
    const OracleDet& d = dets[idx];
    int pick = -1;
    double pick_iou = 0.0;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (used[g] || gts[g].image != d.image || gts[g].cls != d.cls) continue;
      double iou = CornerIou(d.x0, d.y0, d.x1, d.y1, gts[g].x0, gts[g].y0,
                             gts[g].x1, gts[g].y1);
      if (iou < thr) continue;
      if (pick < 0 || iou > pick_iou) {
        pick = static_cast<int>(g);
        pick_iou = iou;
      }
    }
    if (pick >= 0) used[pick] = true;
    out.push_back(pick >= 0);
  }
  return out;
}

// 101-point interpolated AP: at each recall level take the best precision
// over every cutoff reaching that recall.
inline double BruteForceAp(const std::vector<bool>& tp, std::size_t n_gt) {
  double total = 0.0;
  for (int r = 0; r <= 100; ++r) {
    double level = r / 100.0;
    double best = 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < tp.size(); ++i) {
      hits += tp[i] ? 1 : 0;
      double recall = static_cast<double>(hits) / static_cast<double>(n_gt);
      double precision = static_cast<double>(hits) / static_cast<double>(i + 1);
      if (recall >= level) best = std::max(best, precision);
    }
    total += best;
  }
  return total / 101.0;
}

struct OracleClassAp {
  double ap = 0.0;
  double ap50 = 0.0;
};

// AP over IoU 0.50:0.05:0.95 for every class with ground truth.
inline std::map<int, OracleClassAp> BruteForceMap(
    const std::vector<OracleDet>& dets, const std::vector<OracleGt>& gts) {
  std::map<int, std::size_t> n_gt;
  for (const auto& g : gts) ++n_gt[g.cls];
  std::map<int, OracleClassAp> out;
  for (const auto& [cls, count] : n_gt) {
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < dets.size(); ++i) {
      if (dets[i].cls == cls) order.push_back(i);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (dets[a].score != dets[b].score) return dets[a].score > dets[b].score;
      return dets[a].id < dets[b].id;
    });
    double sum = 0.0;
    for (int t = 0; t < 10; ++t) {
      double thr = (50 + 5 * t) / 100.0;
      // Matching within an image only depends on that image's detections in
      // score order, so one pass over the global order is equivalent.
      double ap = BruteForceAp(GreedyLabels(dets, order, gts, thr), count);
      if (t == 0) out[cls].ap50 = ap;
      sum += ap;
    }
    out[cls].ap = sum / 10.0;
  }
  return out;
}

}  // namespace riscore::oracle

#endif  // RISCORE_TESTS_SUPPORT_ORACLES_H_
