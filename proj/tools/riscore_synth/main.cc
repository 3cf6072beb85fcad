// Copyright 2026 The riscore Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Writes the bundled synthetic fixture: a 20-class COCO-style annotation
// file, detector results with 30% label confusion, class-aligned detection
// embeddings and class-name embeddings.
//
//   riscore_synth <out-dir> [seed]

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "riscore/cocoio.h"
#include "riscore/embedding.h"

namespace {

namespace fs = std::filesystem;
using riscore::Annotation;
using riscore::AnnotationSet;
using riscore::Box;
using riscore::Detection;

constexpr int kImages = 120;
constexpr int kWidth = 640;
constexpr int kHeight = 480;
constexpr std::size_t kDim = 64;
constexpr double kConfusionRate = 0.3;
constexpr int kMinPerClass = 12;

const char* const kClassNames[] = {
    "aeroplane", "bicycle", "bird",  "boat",      "bottle",
    "bus",       "car",     "cat",   "chair",     "cow",
    "diningtable", "dog",   "horse", "motorbike", "person",
    "pottedplant", "sheep", "sofa",  "train",     "tvmonitor"};
constexpr int kClasses = 20;
const std::vector<int> kNovel = {3, 6, 10, 14, 18};

struct Rng {
  std::mt19937_64 gen;
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen);
  }
  int integer(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(gen);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen); }
};

std::vector<double> UnitVector(Rng& rng) {
  std::vector<double> v(kDim);
  double norm = 0.0;
  for (double& x : v) {
    x = rng.normal();
    norm += x * x;
  }
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

AnnotationSet MakeAnnotations(Rng& rng) {
  for (;;) {
    AnnotationSet set;
    for (int c = 1; c <= kClasses; ++c) {
      bool novel = std::find(kNovel.begin(), kNovel.end(), c) != kNovel.end();
      set.categories.push_back({c, kClassNames[c - 1], novel ? "novel" : "base"});
    }
    std::vector<int> counts(kClasses + 1, 0);
    long ann_id = 1;
    for (int i = 1; i <= kImages; ++i) {
      set.images.push_back({i, kWidth, kHeight, "img_" + std::to_string(i) + ".jpg"});
      int objects = rng.integer(2, 6);
      for (int o = 0; o < objects; ++o) {
        Annotation ann;
        ann.id = ann_id++;
        ann.image_id = i;
        ann.class_id = rng.integer(1, kClasses);
        double w = std::round(rng.uniform(30, 200));
        double h = std::round(rng.uniform(30, 200));
        ann.box = {std::round(rng.uniform(0, kWidth - w)),
                   std::round(rng.uniform(0, kHeight - h)), w, h};
        ann.iscrowd = rng.uniform(0, 1) < 0.02;
        if (!ann.iscrowd) ++counts[ann.class_id];
        set.annotations.push_back(ann);
      }
    }
    if (*std::min_element(counts.begin() + 1, counts.end()) >= kMinPerClass) {
      return set;
    }
  }
}

// Detector probabilities peaked at `top`, with `second` as runner-up.
std::vector<double> ScoreVector(int top, int second, double top_mass,
                                double second_mass, Rng& rng) {
  std::vector<double> s(kClasses);
  double rest = 1.0 - top_mass - second_mass;
  double total = 0.0;
  for (double& v : s) {
    v = rng.uniform(0.1, 1.0);
    total += v;
  }
  for (int k = 0; k < kClasses; ++k) s[k] *= rest / total;
  s[top - 1] += top_mass;
  s[second - 1] += second_mass;
  return s;
}

int OtherClass(int c, Rng& rng) {
  int o = rng.integer(1, kClasses - 1);
  return o >= c ? o + 1 : o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: riscore_synth <out-dir> [seed]\n";
    return 1;
  }
  const fs::path out = argv[1];
  Rng rng{std::mt19937_64(argc > 2 ? std::stoull(argv[2]) : 2024)};
  fs::create_directories(out);

  AnnotationSet gt = MakeAnnotations(rng);

  std::vector<std::vector<double>> text(kClasses);
  std::vector<float> text_data;
  std::vector<std::string> text_keys;
  for (int c = 0; c < kClasses; ++c) {
    text[c] = UnitVector(rng);
    text_data.insert(text_data.end(), text[c].begin(), text[c].end());
    text_keys.emplace_back(kClassNames[c]);
  }

  std::vector<Detection> dets;
  std::vector<float> emb_data;
  std::vector<std::string> emb_keys;
  auto add_embedding = [&](const std::string& id, const std::vector<double>& v) {
    // Stored unnormalized; the loader normalizes.
    double scale = rng.uniform(0.5, 3.0);
    for (double x : v) emb_data.push_back(static_cast<float>(x * scale));
    emb_keys.push_back(id);
  };

  int next_det = 0;
  for (const auto& ann : gt.annotations) {
    if (ann.iscrowd) continue;
    const int truth = ann.class_id;
    int top = truth;
    int second = OtherClass(truth, rng);
    double top_mass = rng.uniform(0.5, 0.85);
    double second_mass = rng.uniform(0.03, 0.12);
    if (rng.uniform(0, 1) < kConfusionRate) {
      top = OtherClass(truth, rng);
      second = truth;
      top_mass = rng.uniform(0.45, 0.75);
      second_mass = rng.uniform(0.12, 0.25);
    }
    std::vector<double> sv = ScoreVector(top, second, top_mass, second_mass, rng);
    Box box = ann.box;
    box.x += std::round(rng.uniform(-0.05, 0.05) * box.w);
    box.y += std::round(rng.uniform(-0.05, 0.05) * box.h);

    // Class-aligned crop embedding: the true class's text direction plus noise.
    std::vector<double> v = text[truth - 1];
    std::vector<double> noise = UnitVector(rng);
    for (std::size_t j = 0; j < kDim; ++j) v[j] = v[j] + 0.35 * noise[j];

    for (int cls : {top, second}) {
      Detection d;
      d.image_id = ann.image_id;
      d.det_id = "d" + std::to_string(next_det++);
      d.class_id = cls;
      d.box = box;
      d.score = sv[cls - 1];
      d.score_vector = sv;
      dets.push_back(d);
      // A few crops are dropped, as an exporter does for degenerate boxes.
      if (rng.uniform(0, 1) > 0.01) add_embedding(d.det_id, v);
    }
  }
  // Background false positives.
  for (int i = 0; i < 40; ++i) {
    Detection d;
    d.image_id = rng.integer(1, kImages);
    d.det_id = "d" + std::to_string(next_det++);
    d.class_id = rng.integer(1, kClasses);
    double w = std::round(rng.uniform(30, 120));
    double h = std::round(rng.uniform(30, 120));
    d.box = {std::round(rng.uniform(0, kWidth - w)),
             std::round(rng.uniform(0, kHeight - h)), w, h};
    std::vector<double> sv =
        ScoreVector(d.class_id, OtherClass(d.class_id, rng),
                    rng.uniform(0.2, 0.6), 0.05, rng);
    d.score = sv[d.class_id - 1];
    d.score_vector = sv;
    dets.push_back(d);
    add_embedding(d.det_id, UnitVector(rng));
  }

  std::ofstream(out / "annotations.json") << riscore::SerializeAnnotations(gt);
  std::ofstream(out / "results.json") << riscore::SerializeResults(dets);
  riscore::SaveEmbeddings(
      riscore::EmbeddingMatrix(kDim, std::move(text_data), std::move(text_keys),
                               /*normalized=*/true),
      out / "text_embs.remb");
  riscore::SaveEmbeddings(
      riscore::EmbeddingMatrix(kDim, std::move(emb_data), std::move(emb_keys),
                               /*normalized=*/false),
      out / "det_embs.remb");
  std::cout << "images " << gt.images.size() << "\nannotations "
            << gt.annotations.size() << "\ndetections " << dets.size() << '\n';
  return 0;
}
