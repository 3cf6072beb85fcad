// Copyright 2026 The riscore Authors.
// SPDX-License-Identifier: Apache-2.0

#include "riscore/cocoio.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <map>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "riscore/error.h"
#include "support/oracles.h"

namespace riscore {
namespace {

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no riscore::Error thrown";
  return ErrorCode::kInvalidArgument;
}

// Three images. Manifest:
//   image 1: person x3 (ids 1,2,3), dog (4)
//   image 2: dog x2 (5,6), cat (7), crowd person (8)
//   image 3: cat (9), person (10)
// person: 4 non-crowd, dog: 3, cat: 2.
constexpr char kFixture[] = R"({
  "info": {"description": "ignored"},
  "images": [{"id": 1, "width": 100, "height": 80, "file_name": "a.jpg"},
             {"id": 2, "width": 100, "height": 80},
             {"id": 3, "width": 100, "height": 80}],
  "categories": [{"id": 1, "name": "person", "split": "base"},
                 {"id": 2, "name": "dog", "split": "novel"},
                 {"id": 3, "name": "cat"}],
  "annotations": [
    {"id": 1, "image_id": 1, "category_id": 1, "bbox": [0, 0, 10, 10]},
    {"id": 2, "image_id": 1, "category_id": 1, "bbox": [20, 0, 10, 10], "iscrowd": 0},
    {"id": 3, "image_id": 1, "category_id": 1, "bbox": [40, 0, 10, 10]},
    {"id": 4, "image_id": 1, "category_id": 2, "bbox": [60, 0, 10, 10]},
    {"id": 5, "image_id": 2, "category_id": 2, "bbox": [0, 0, 10, 10]},
    {"id": 6, "image_id": 2, "category_id": 2, "bbox": [20, 0, 10, 10]},
    {"id": 7, "image_id": 2, "category_id": 3, "bbox": [40, 0, 10, 10]},
    {"id": 8, "image_id": 2, "category_id": 1, "bbox": [0, 0, 90, 70], "iscrowd": 1},
    {"id": 9, "image_id": 3, "category_id": 3, "bbox": [0, 0, 10, 10]},
    {"id": 10, "image_id": 3, "category_id": 1, "bbox": [20, 20, 10, 10]}
  ]
})";

TEST(ParseAnnotationsTest, FixtureMatchesManifest) {
  AnnotationSet set = ParseAnnotationsText(kFixture);
  EXPECT_EQ(set.images.size(), 3u);
  EXPECT_EQ(set.categories.size(), 3u);
  EXPECT_EQ(set.annotations.size(), 10u);
  std::map<ClassId, int> non_crowd;
  for (const auto& a : set.annotations) {
    if (!a.iscrowd) ++non_crowd[a.class_id];
  }
  EXPECT_EQ(non_crowd, (std::map<ClassId, int>{{1, 4}, {2, 3}, {3, 2}}));
  EXPECT_TRUE(set.annotations[7].iscrowd);
  EXPECT_EQ(set.images[0].file_name, "a.jpg");
  ClassPartition partition = PartitionFromCategories(set.categories);
  EXPECT_EQ(partition.base, (std::set<ClassId>{1}));
  EXPECT_EQ(partition.novel, (std::set<ClassId>{2}));
}

TEST(ParseAnnotationsTest, EmptyArrays) {
  AnnotationSet set =
      ParseAnnotationsText(R"({"images": [], "categories": [], "annotations": []})");
  EXPECT_TRUE(set.images.empty());
  EXPECT_TRUE(set.annotations.empty());
}

TEST(ParseAnnotationsTest, Errors) {
  EXPECT_EQ(CodeOf([] {
              ParseAnnotationsText(R"({"images": [], "categories": [{"id": 1, "name": "a"}],
                "annotations": [{"id": 1, "image_id": 9, "category_id": 1, "bbox": [0,0,1,1]}]})");
            }),
            ErrorCode::kDanglingReference);
  EXPECT_EQ(CodeOf([] { ParseAnnotationsText("{\"images\": [}"); }),
            ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] { ParseAnnotationsText(R"({"images": []})"); }),
            ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] {
              ParseAnnotationsText(R"({"images": [{"id": 1}], "categories": [{"id": 1, "name": "a"}],
                "annotations": [{"id": 1, "image_id": 1, "category_id": 1, "bbox": [0,0,0,1]}]})");
            }),
            ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] { ParseAnnotations("/nonexistent/gt.json"); }),
            ErrorCode::kIoFailure);
}

TEST(SerializeAnnotationsTest, RoundTrip) {
  AnnotationSet set = ParseAnnotationsText(kFixture);
  AnnotationSet back = ParseAnnotationsText(SerializeAnnotations(set));
  EXPECT_EQ(back.images, set.images);
  EXPECT_EQ(back.categories, set.categories);
  EXPECT_EQ(back.annotations, set.annotations);
}

TEST(ResultsTest, ParseAndSerializePreservesFields) {
  std::vector<Detection> dets = ParseResultsText(R"([
    {"image_id": 1, "category_id": 2, "bbox": [1, 2, 3, 4], "score": 0.5,
     "note": {"a": [1, 2]}},
    {"image_id": 1, "category_id": 1, "bbox": [1, 2, 3, 4], "score": 0.25,
     "det_id": "x7", "score_vector": [0.25, 0.75, 0.0]}
  ])");
  ASSERT_EQ(dets.size(), 2u);
  EXPECT_EQ(dets[0].det_id, "0");
  EXPECT_EQ(dets[1].det_id, "x7");
  EXPECT_EQ(dets[1].score_vector->size(), 3u);
  EXPECT_EQ(dets[0].extra.at("note"), R"({"a":[1,2]})");
  std::vector<Detection> back = ParseResultsText(SerializeResults(dets));
  EXPECT_EQ(back, dets);
}

TEST(ResultsTest, Errors) {
  EXPECT_EQ(CodeOf([] {
              ParseResultsText(R"([{"image_id": 1, "category_id": 2, "bbox": [1,2,3,4], "score": 1.5}])");
            }),
            ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] {
              ParseResultsText(R"([{"image_id": 1, "category_id": 2, "bbox": [1,2,3], "score": 0.5}])");
            }),
            ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] {
              ParseResultsText(R"([{"image_id": 1, "category_id": 2, "bbox": [1,2,3,4], "score": 0.5, "det_id": "a"},
                                   {"image_id": 1, "category_id": 2, "bbox": [1,2,3,4], "score": 0.5, "det_id": "a"}])");
            }),
            ErrorCode::kParseError);
}

TEST(SampleKShotTest, InsufficientInstances) {
  AnnotationSet set = ParseAnnotationsText(kFixture);
  std::vector<ClassId> classes = {3};
  EXPECT_EQ(CodeOf([&] { SampleKShot(set, 3, classes, 0); }),
            ErrorCode::kInsufficientInstances);
  // The crowd person does not count toward supply.
  std::vector<ClassId> person = {1};
  EXPECT_EQ(CodeOf([&] { SampleKShot(set, 5, person, 0); }),
            ErrorCode::kInsufficientInstances);
}

TEST(SampleKShotTest, DeterministicForSeed) {
  AnnotationSet set = ParseAnnotationsText(kFixture);
  std::vector<ClassId> classes = {1, 2, 3};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    EXPECT_EQ(SerializeSeed(SampleKShot(set, 2, classes, seed)),
              SerializeSeed(SampleKShot(set, 2, classes, seed)));
  }
}

TEST(SampleKShotTest, OneImagePerClassEnumeration) {
  // Each class lives on exactly one image, so k=1 must select exactly those
  // images and exactly that class's annotations on them.
  AnnotationSet set = ParseAnnotationsText(R"({
    "images": [{"id": 1}, {"id": 2}],
    "categories": [{"id": 1, "name": "a"}, {"id": 2, "name": "b"}],
    "annotations": [
      {"id": 1, "image_id": 1, "category_id": 1, "bbox": [0,0,5,5]},
      {"id": 2, "image_id": 1, "category_id": 1, "bbox": [5,5,5,5]},
      {"id": 3, "image_id": 2, "category_id": 2, "bbox": [0,0,5,5]}]})");
  std::vector<ClassId> classes = {1, 2};
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    KShotSeed s = SampleKShot(set, 1, classes, seed);
    EXPECT_EQ(s.subset.images.size(), 2u);
    ASSERT_EQ(s.subset.annotations.size(), 3u);
    EXPECT_EQ(s.provenance.at(1), (std::vector<AnnotationId>{1, 2}));
    EXPECT_EQ(s.provenance.at(2), (std::vector<AnnotationId>{3}));
  }
}

TEST(SampleKShotTest, Invariants) {
  AnnotationSet set = ParseAnnotationsText(kFixture);
  std::vector<ClassId> classes = {1, 2, 3};
  std::map<std::pair<ClassId, ImageId>, std::size_t> per_image;
  for (const auto& a : set.annotations) {
    if (!a.iscrowd) ++per_image[{a.class_id, a.image_id}];
  }
  for (std::size_t k = 1; k <= 2; ++k) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      KShotSeed s = SampleKShot(set, k, classes, seed);
      std::set<AnnotationId> full_ids;
      for (const auto& a : set.annotations) full_ids.insert(a.id);
      for (const auto& a : s.subset.annotations) {
        EXPECT_TRUE(full_ids.contains(a.id));
        EXPECT_FALSE(a.iscrowd);
      }
      for (ClassId c : classes) {
        std::size_t max_in_image = 0;
        for (const auto& [key, n] : per_image) {
          if (key.first == c) max_in_image = std::max(max_in_image, n);
        }
        std::size_t count = s.provenance.at(c).size();
        EXPECT_GE(count, k);
        EXPECT_LE(count, k + max_in_image - 1);
      }
    }
  }
}

TEST(MissingStatsTest, SubsetEqualsFull) {
  AnnotationSet set = ParseAnnotationsText(kFixture);
  MissingStats stats = MissingAnnotationStats(set, set);
  for (const auto& [cls, n] : stats.per_class) EXPECT_EQ(n, 0u);
  EXPECT_EQ(stats.per_image.size(), 3u);
}

TEST(MissingStatsTest, EmptySubset) {
  AnnotationSet set = ParseAnnotationsText(kFixture);
  AnnotationSet empty;
  empty.categories = set.categories;
  MissingStats stats = MissingAnnotationStats(set, empty);
  EXPECT_EQ(stats.per_class.size(), 3u);
  for (const auto& [cls, n] : stats.per_class) EXPECT_EQ(n, 0u);
}

TEST(MissingStatsTest, ExtraPersonsCounted) {
  // Image 1 holds persons 1,2,3 and dog 4; keep person 1 and the dog.
  AnnotationSet set = ParseAnnotationsText(kFixture);
  AnnotationSet subset;
  subset.categories = set.categories;
  subset.images = {set.images[0]};
  subset.annotations = {set.annotations[0], set.annotations[3]};
  MissingStats stats = MissingAnnotationStats(set, subset);
  EXPECT_EQ(stats.per_class.at(1), 2u);
  EXPECT_EQ(stats.per_class.at(2), 0u);
  ASSERT_EQ(stats.per_image.size(), 1u);
  EXPECT_EQ(stats.per_image[0].full, 4u);
  EXPECT_EQ(stats.per_image[0].kept, 2u);
  EXPECT_EQ(stats.per_image[0].missing, 2u);
  std::ostringstream csv;
  WriteMissingCsv(stats, set.categories, csv);
  EXPECT_EQ(csv.str(),
            "class_id,class_name,missing_count\n1,person,2\n2,dog,0\n3,cat,0\n");
}

TEST(MissingStatsTest, SampledSeedsSatisfyIdentity) {
  AnnotationSet set = ParseAnnotationsText(kFixture);
  std::vector<ClassId> classes = {2};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    KShotSeed s = SampleKShot(set, 1, classes, seed);
    MissingStats stats = MissingAnnotationStats(set, s.subset);
    for (const auto& row : stats.per_image) {
      EXPECT_EQ(row.kept + row.missing, row.full);
    }
  }
}

TEST(MissingStatsTest, SubsetNotContained) {
  AnnotationSet set = ParseAnnotationsText(kFixture);
  AnnotationSet subset;
  subset.images = {{99, 1, 1, ""}};
  EXPECT_EQ(CodeOf([&] { MissingAnnotationStats(set, subset); }),
            ErrorCode::kSubsetNotContained);
  AnnotationSet bad_ann;
  bad_ann.images = {set.images[0]};
  bad_ann.annotations = {{1, 1, 2, {0, 0, 10, 10}, false}};  // wrong class
  EXPECT_EQ(CodeOf([&] { MissingAnnotationStats(set, bad_ann); }),
            ErrorCode::kSubsetNotContained);
}

TEST(AggregateCiTest, Examples) {
  std::vector<double> equal = {4.0, 4.0, 4.0, 4.0};
  ConfidenceInterval flat = AggregateCi(equal);
  EXPECT_EQ(flat.low, flat.high);
  EXPECT_EQ(flat.mean, 4.0);

  // mean 2, s = 1, t(0.975, 2) = 4.302652729749464.
  std::vector<double> v = {1.0, 2.0, 3.0};
  ConfidenceInterval ci = AggregateCi(v);
  EXPECT_NEAR(ci.mean, 2.0, 1e-15);
  EXPECT_NEAR(ci.low, -0.48413771175033105, 1e-12);
  EXPECT_NEAR(ci.high, 4.484137711750331, 1e-12);

  std::vector<double> one = {1.0};
  EXPECT_EQ(CodeOf([&] { AggregateCi(one); }), ErrorCode::kTooFewSamples);
}

TEST(AggregateCiTest, MatchesTableOracle) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 50.0);
  for (std::size_t n = 2; n <= 31; ++n) {
    std::vector<double> v(n);
    for (double& x : v) x = std::round(u(rng));
    ConfidenceInterval ci = AggregateCi(v);
    oracle::Interval ref = oracle::StudentInterval(v);
    EXPECT_NEAR(ci.mean, ref.mean, 1e-9);
    EXPECT_NEAR(ci.low, ref.low, 1e-9);
    EXPECT_NEAR(ci.high, ref.high, 1e-9);
    EXPECT_LE(ci.low, ci.mean);
    EXPECT_LE(ci.mean, ci.high);
  }
}

}  // namespace
}  // namespace riscore
