// Copyright 2026 The riscore Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef RISCORE_TESTS_SUPPORT_SCENES_H_
#define RISCORE_TESTS_SUPPORT_SCENES_H_

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "riscore/cocoio.h"
#include "riscore/types.h"
#include "support/oracles.h"

namespace riscore::testing {

// A random detection scene in both library and oracle form.
struct Scene {
  AnnotationSet gt;
  std::vector<Detection> dets;
  std::vector<oracle::OracleDet> oracle_dets;
  std::vector<oracle::OracleGt> oracle_gts;
};

// Boxes on a small integer grid so overlaps are frequent. Scores are drawn
// from a coarse set to exercise tie-breaking.
inline Scene RandomScene(std::mt19937_64& rng, int n_images, int n_classes,
                         int max_boxes) {
  Scene s;
  std::uniform_int_distribution<int> coord(0, 12);
  std::uniform_int_distribution<int> extent(2, 8);
  std::uniform_int_distribution<int> boxes(0, max_boxes);
  std::uniform_int_distribution<int> cls(1, n_classes);
  std::uniform_int_distribution<int> score(1, 20);
  std::bernoulli_distribution jitter(0.7);
  std::uniform_int_distribution<int> shift(-2, 2);
  for (int c = 1; c <= n_classes; ++c) {
    s.gt.categories.push_back({c, "c" + std::to_string(c), ""});
  }
  AnnotationId next_ann = 1;
  int next_det = 0;
  for (int im = 1; im <= n_images; ++im) {
    s.gt.images.push_back({im, 32, 32, ""});
    int n_gt = boxes(rng);
    std::vector<Box> placed;
    for (int i = 0; i < n_gt; ++i) {
      Box b{double(coord(rng)), double(coord(rng)), double(extent(rng)),
            double(extent(rng))};
      int c = cls(rng);
      s.gt.annotations.push_back({next_ann++, im, c, b, false});
      s.oracle_gts.push_back({im, c, b.x, b.y, b.x + b.w, b.y + b.h});
      placed.push_back(b);
    }
    int n_det = boxes(rng);
    for (int i = 0; i < n_det; ++i) {
      Box b;
      if (!placed.empty() && jitter(rng)) {
        const Box& ref = placed[std::uniform_int_distribution<std::size_t>(
            0, placed.size() - 1)(rng)];
        b = {ref.x + shift(rng), ref.y + shift(rng),
             std::max(1.0, ref.w + shift(rng)), std::max(1.0, ref.h + shift(rng))};
      } else {
        b = {double(coord(rng)), double(coord(rng)), double(extent(rng)),
             double(extent(rng))};
      }
      Detection d;
      d.image_id = im;
      d.class_id = cls(rng);
      d.box = b;
      d.score = score(rng) / 20.0;
      char id[16];
      std::snprintf(id, sizeof(id), "d%05d", next_det++);
      d.det_id = id;
      s.oracle_dets.push_back({im, d.class_id, b.x, b.y, b.x + b.w, b.y + b.h,
                               d.score, d.det_id});
      s.dets.push_back(std::move(d));
    }
  }
  return s;
}

}  // namespace riscore::testing

#endif  // RISCORE_TESTS_SUPPORT_SCENES_H_
