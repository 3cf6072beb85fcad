// Copyright 2026 The riscore Authors.
// SPDX-License-Identifier: Apache-2.0

#include "riscore/eval.h"

#include <algorithm>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "riscore/error.h"
#include "support/oracles.h"
#include "support/scenes.h"

namespace riscore {
namespace {

TEST(IouTest, Examples) {
  Box unit{0, 0, 1, 1};
  EXPECT_EQ(Iou(unit, unit), 1.0);
  EXPECT_EQ(Iou(unit, Box{2, 2, 1, 1}), 0.0);
  EXPECT_EQ(Iou(unit, Box{1, 0, 1, 1}), 0.0);
  EXPECT_DOUBLE_EQ(Iou(unit, Box{0.5, 0, 1, 1}), 1.0 / 3.0);
}

TEST(IouTest, Symmetric) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    Box a{u(rng), u(rng), u(rng) + 0.1, u(rng) + 0.1};
    Box b{u(rng), u(rng), u(rng) + 0.1, u(rng) + 0.1};
    double v = Iou(a, b);
    EXPECT_EQ(v, Iou(b, a));
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(IouThresholdsTest, Grid) {
  auto t = IouThresholds();
  EXPECT_EQ(t.front(), 0.5);
  EXPECT_EQ(t.back(), 0.95);
  EXPECT_EQ(t[5], 0.75);
}

TEST(MatchDetectionsTest, Examples) {
  std::vector<Box> gt = {{0, 0, 10, 10}};
  std::vector<Box> one = {{0, 0, 10, 10}};
  EXPECT_EQ(MatchDetections(one, gt, 0.5), (std::vector<bool>{true}));
  std::vector<Box> two = {{0, 0, 10, 10}, {1, 0, 10, 10}};
  EXPECT_EQ(MatchDetections(two, gt, 0.5), (std::vector<bool>{true, false}));
  std::vector<Box> none;
  EXPECT_TRUE(MatchDetections(none, gt, 0.5).empty());
}

TEST(MatchDetectionsTest, PrefersHighestIou) {
  std::vector<Box> gt = {{0, 0, 10, 10}, {2, 0, 10, 10}};
  std::vector<Box> dets = {{2, 0, 10, 10}, {0, 0, 10, 10}};
  // First det takes its exact match, leaving the other for the second.
  EXPECT_EQ(MatchDetections(dets, gt, 0.9), (std::vector<bool>{true, true}));
}

TEST(MatchDetectionsTest, AgreesWithExhaustiveScan) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> c(0, 6);
  std::uniform_int_distribution<int> e(1, 5);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Box> dets(5), gts(5);
    std::vector<oracle::OracleDet> od;
    std::vector<oracle::OracleGt> og;
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < 5; ++i) {
      gts[i] = {double(c(rng)), double(c(rng)), double(e(rng)), double(e(rng))};
      dets[i] = {double(c(rng)), double(c(rng)), double(e(rng)), double(e(rng))};
      og.push_back({0, 0, gts[i].x, gts[i].y, gts[i].x + gts[i].w, gts[i].y + gts[i].h});
      od.push_back({0, 0, dets[i].x, dets[i].y, dets[i].x + dets[i].w,
                    dets[i].y + dets[i].h, 0.0, ""});
      order.push_back(i);
    }
    for (double thr : IouThresholds()) {
      EXPECT_EQ(MatchDetections(dets, gts, thr),
                oracle::GreedyLabels(od, order, og, thr));
    }
  }
}

TEST(AveragePrecisionTest, Examples) {
  EXPECT_EQ(AveragePrecision({true, true, true}, 3), 1.0);
  EXPECT_EQ(AveragePrecision({}, 3), 0.0);
  EXPECT_EQ(AveragePrecision({false, false}, 3), 0.0);
  EXPECT_NEAR(AveragePrecision({true, false, true}, 2), 0.834983498349835, 1e-15);
  EXPECT_THROW(AveragePrecision({true}, 0), Error);
}

TEST(AveragePrecisionTest, InterpolatedPrecisionIsMonotone) {
  std::mt19937_64 rng(3);
  std::bernoulli_distribution flip(0.5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<bool> tp(30);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < tp.size(); ++i) {
      tp[i] = flip(rng);
      hits += tp[i];
    }
    std::size_t n_gt = hits + 3;
    std::vector<double> curve = InterpolatedPrecision(tp, n_gt);
    ASSERT_EQ(curve.size(), kNumRecallPoints);
    for (std::size_t r = 1; r < curve.size(); ++r) EXPECT_LE(curve[r], curve[r - 1]);
    EXPECT_NEAR(AveragePrecision(tp, n_gt), oracle::BruteForceAp(tp, n_gt), 1e-12);
  }
}

AnnotationSet TinyGt() {
  AnnotationSet gt;
  gt.images = {{1, 50, 50, ""}, {2, 50, 50, ""}};
  gt.categories = {{1, "a", "base"}, {2, "b", "novel"}, {3, "empty", "novel"}};
  gt.annotations = {{1, 1, 1, {0, 0, 10, 10}, false},
                    {2, 1, 2, {20, 20, 10, 10}, false},
                    {3, 2, 1, {5, 5, 10, 10}, false}};
  return gt;
}

std::vector<Detection> PerfectDets(const AnnotationSet& gt) {
  std::vector<Detection> dets;
  for (const auto& a : gt.annotations) {
    Detection d;
    d.image_id = a.image_id;
    d.class_id = a.class_id;
    d.box = a.box;
    d.score = 0.9;
    d.det_id = std::to_string(a.id);
    dets.push_back(d);
  }
  return dets;
}

TEST(CocoMapTest, PerfectAndEmpty) {
  AnnotationSet gt = TinyGt();
  ApReport perfect = CocoMap(PerfectDets(gt), gt);
  EXPECT_EQ(perfect.mean.ap, 1.0);
  EXPECT_EQ(perfect.mean.ap50, 1.0);
  EXPECT_EQ(perfect.per_class.size(), 2u);  // class 3 has no ground truth
  ApReport empty = CocoMap({}, gt);
  EXPECT_EQ(empty.mean.ap, 0.0);
}

TEST(CocoMapTest, Partition) {
  AnnotationSet gt = TinyGt();
  std::vector<Detection> dets = PerfectDets(gt);
  dets.erase(dets.begin() + 1);  // drop the only class-2 detection
  EvalOptions opts;
  opts.partition = PartitionFromCategories(gt.categories);
  ApReport r = CocoMap(dets, gt, opts);
  ASSERT_TRUE(r.base && r.novel);
  EXPECT_EQ(r.base->ap, 1.0);
  EXPECT_EQ(r.novel->ap, 0.0);
  EXPECT_EQ(r.novel->n_classes, 1u);
  EXPECT_EQ(r.mean.ap, 0.5);
}

TEST(CocoMapTest, CrowdIgnoredAndNoGroundTruth) {
  AnnotationSet gt = TinyGt();
  for (auto& a : gt.annotations) a.iscrowd = true;
  try {
    CocoMap({}, gt);
    FAIL() << "expected NoGroundTruth";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoGroundTruth);
  }
}

TEST(CocoMapTest, DanglingDetection) {
  AnnotationSet gt = TinyGt();
  std::vector<Detection> dets = PerfectDets(gt);
  dets[0].image_id = 42;
  try {
    CocoMap(dets, gt);
    FAIL() << "expected DanglingReference";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDanglingReference);
  }
}

TEST(CocoMapTest, MaxDetsCapsPerImage) {
  AnnotationSet gt = TinyGt();
  std::vector<Detection> dets = PerfectDets(gt);
  Detection fp = dets[0];
  fp.box = {30, 0, 10, 10};
  fp.score = 0.95;
  fp.det_id = "fp";
  dets.push_back(fp);
  EvalOptions opts;
  opts.max_dets = 1;
  ApReport capped = CocoMap(dets, gt, opts);
  ApReport full = CocoMap(dets, gt);
  EXPECT_LT(capped.per_class[0].ap50, full.per_class[0].ap50);
}

TEST(CocoMapTest, MatchesBruteForceOracle) {
  std::mt19937_64 rng(11);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    testing::Scene s = testing::RandomScene(rng, 4, 3, 6);
    auto ref = oracle::BruteForceMap(s.oracle_dets, s.oracle_gts);
    if (ref.empty()) continue;
    ApReport r = CocoMap(s.dets, s.gt);
    ASSERT_EQ(r.per_class.size(), ref.size());
    for (const auto& c : r.per_class) {
      EXPECT_NEAR(c.ap, ref.at(c.class_id).ap, 1e-9);
      EXPECT_NEAR(c.ap50, ref.at(c.class_id).ap50, 1e-9);
    }
    ++checked;
  }
  EXPECT_GT(checked, 40);
}

TEST(CocoMapPropertyTest, ScoreTransformsAndAppends) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    testing::Scene s = testing::RandomScene(rng, 3, 2, 6);
    if (s.gt.annotations.empty()) continue;
    ApReport base = CocoMap(s.dets, s.gt);

    // Strictly monotone score transforms leave AP unchanged.
    std::vector<Detection> squashed = s.dets;
    for (auto& d : squashed) d.score = d.score * d.score * 0.5;
    ApReport same = CocoMap(squashed, s.gt);
    for (std::size_t i = 0; i < base.per_class.size(); ++i) {
      EXPECT_EQ(same.per_class[i].ap, base.per_class[i].ap);
      EXPECT_LE(base.per_class[i].ap, base.per_class[i].ap50);
    }

    // A false positive below every score cannot raise AP.
    std::vector<Detection> with_fp = s.dets;
    Detection fp;
    fp.image_id = 1;
    fp.class_id = 1;
    fp.box = {100, 100, 1, 1};
    fp.score = 0.0;
    fp.det_id = "zz";
    with_fp.push_back(fp);
    ApReport lower = CocoMap(with_fp, s.gt);
    for (std::size_t i = 0; i < base.per_class.size(); ++i) {
      EXPECT_LE(lower.per_class[i].ap, base.per_class[i].ap);
    }

    // Covering one new instance with a lowest-score exact detection cannot
    // lower AP at any threshold.
    AnnotationSet grown = s.gt;
    Box fresh{200, 200, 5, 5};
    grown.images[0].width = 300;
    grown.annotations.push_back({9999, 1, 1, fresh, false});
    std::vector<Detection> miss_dets = s.dets;
    ApReport without = CocoMap(miss_dets, grown);
    Detection tp = fp;
    tp.box = fresh;
    tp.det_id = "zz";
    miss_dets.push_back(tp);
    ApReport with = CocoMap(miss_dets, grown);
    for (std::size_t i = 0; i < with.per_class.size(); ++i) {
      EXPECT_GE(with.per_class[i].ap + 1e-12, without.per_class[i].ap);
    }
  }
}

TEST(ReportWritersTest, CompareOfIdenticalReportsIsZero) {
  AnnotationSet gt = TinyGt();
  EvalOptions opts;
  opts.partition = PartitionFromCategories(gt.categories);
  ApReport r = CocoMap(PerfectDets(gt), gt, opts);
  std::ostringstream csv;
  WriteCompareCsv(r, r, csv);
  std::istringstream in(csv.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "scope,ap_a,ap_b,delta_ap,ap50_a,ap50_b,delta_ap50");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    ASSERT_EQ(cells.size(), 7u);
    EXPECT_EQ(std::stod(cells[3]), 0.0);
    EXPECT_EQ(std::stod(cells[6]), 0.0);
  }
  EXPECT_EQ(rows, 5);  // mean, base, novel, two classes
  std::ostringstream json;
  WriteReportJson(r, json);
  EXPECT_NE(json.str().find("precision_at_recall"), std::string::npos);
}

}  // namespace
}  // namespace riscore
