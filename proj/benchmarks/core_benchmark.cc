// Copyright 2026 The riscore Authors.
// SPDX-License-Identifier: Apache-2.0

#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "riscore/bnrl.h"
#include "riscore/cocoio.h"
#include "riscore/embedding.h"
#include "riscore/eval.h"
#include "riscore/rescore.h"

namespace riscore {
namespace {

EmbeddingMatrix RandomUnitRows(std::size_t rows, std::size_t dim, const std::string& tag,
                               std::mt19937_64& rng) {
  std::normal_distribution<float> normal;
  std::vector<float> data(rows * dim);
  for (float& v : data) v = normal(rng);
  std::vector<std::string> keys(rows);
  for (std::size_t i = 0; i < rows; ++i) keys[i] = tag + std::to_string(i);
  return L2Normalize(EmbeddingMatrix(dim, std::move(data), std::move(keys)));
}

void BM_SimilarityScores(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  EmbeddingMatrix image = RandomUnitRows(n, 512, "d", rng);
  EmbeddingMatrix text = RandomUnitRows(80, 512, "t", rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(SimilarityScores(image, text, {}));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_SimilarityScores)->Arg(100)->Arg(1000)->Arg(10000);

void BM_FuseScores(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u;
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> f(n * 80), m(n * 80);
  for (double& v : f) v = u(rng);
  for (double& v : m) v = u(rng);
  ScoreMatrix s_f(n, 80, f), s_m(n, 80, m);
  for (auto _ : state) {
    benchmark::DoNotOptimize(FuseScores(s_f, s_m, {.c = 0.7}));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_FuseScores)->Arg(1000)->Arg(10000);

void BM_CocoMap(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const int n_images = static_cast<int>(state.range(0));
  std::uniform_real_distribution<double> coord(0, 500), extent(10, 120), u;
  std::uniform_int_distribution<int> cls(1, 20);
  AnnotationSet gt;
  for (int c = 1; c <= 20; ++c) gt.categories.push_back({c, "c" + std::to_string(c), ""});
  std::vector<Detection> dets;
  AnnotationId ann = 1;
  for (int im = 1; im <= n_images; ++im) {
    gt.images.push_back({im, 640, 640, ""});
    for (int i = 0; i < 8; ++i) {
      Box b{coord(rng), coord(rng), extent(rng), extent(rng)};
      int c = cls(rng);
      gt.annotations.push_back({ann, im, c, b, false});
      Detection d;
      d.image_id = im;
      d.class_id = u(rng) < 0.8 ? c : cls(rng);
      d.box = {b.x + 5 * u(rng), b.y + 5 * u(rng), b.w, b.h};
      d.score = u(rng);
      d.det_id = std::to_string(ann++);
      dets.push_back(std::move(d));
    }
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(CocoMap(dets, gt));
  }
  state.SetItemsProcessed(state.iterations() * dets.size());
}
BENCHMARK(BM_CocoMap)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_BnrlGradient(benchmark::State& state) {
  std::mt19937_64 rng(4);
  const auto n = static_cast<std::size_t>(state.range(0));
  BnrlParams params;
  params.bg_class = n - 1;
  ClassDistribution dist(RandomDistribution(n, 0.0, rng), 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(BnrlTotal(dist, params));
    benchmark::DoNotOptimize(BnrlGradient(dist, params));
  }
}
BENCHMARK(BM_BnrlGradient)->Arg(21)->Arg(81);

}  // namespace
}  // namespace riscore

BENCHMARK_MAIN();
