// Copyright 2026 The riscore Authors.
// SPDX-License-Identifier: Apache-2.0

#include "commands.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "riscore/cocoio.h"
#include "riscore/error.h"
#include "riscore/eval.h"
#include "svg_plot.h"

namespace riscore::tools {
namespace {

namespace fs = std::filesystem;

void WriteFile(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.close();
  if (!out) throw Error(ErrorCode::kIoFailure, "failed to write " + path.string());
}

template <typename Fn>
void WriteWith(const fs::path& path, Fn&& fn) {
  std::ostringstream ss;
  fn(ss);
  WriteFile(path, ss.str());
}

std::set<ClassId> ToSet(const std::vector<int>& v) { return {v.begin(), v.end()}; }

ClassPartition ResolvePartition(const AnnotationSet& gt,
                                const std::vector<int>& base,
                                const std::vector<int>& novel) {
  ClassPartition partition = PartitionFromCategories(gt.categories);
  if (!base.empty()) partition.base = ToSet(base);
  if (!novel.empty()) partition.novel = ToSet(novel);
  return partition;
}

struct RescoreInputs {
  AnnotationSet gt;
  std::vector<Detection> detections;
  EmbeddingMatrix image;
  EmbeddingMatrix text;
};

RescoreInputs LoadRescoreInputs(const RescoreConfig& config) {
  RescoreInputs in;
  in.gt = ParseAnnotations(config.gt);
  in.detections = ParseResults(config.results);
  in.image = LoadNormalizedEmbeddings(config.image_embs);
  in.text = LoadNormalizedEmbeddings(config.text_embs);
  return in;
}

FusionParams MakeFusion(const RescoreConfig& config, const AnnotationSet& gt,
                        double c) {
  FusionParams fusion;
  fusion.c = c;
  fusion.skip_base = config.skip_base;
  if (config.skip_base) {
    fusion.base_class_ids = config.base_classes.empty()
                                ? PartitionFromCategories(gt.categories).base
                                : ToSet(config.base_classes);
  }
  return fusion;
}

std::vector<double> LinearGrid(double lo, double hi, std::size_t points) {
  if (points < 2) {
    throw Error(ErrorCode::kInvalidArgument, "grid needs at least 2 points");
  }
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = lo + (hi - lo) * static_cast<double>(i) /
                       static_cast<double>(points - 1);
  }
  return grid;
}

}  // namespace

int CmdEmbeddings(const EmbeddingsConfig& config) {
  EmbeddingMatrix m = LoadEmbeddings(config.input);
  double worst = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    worst = std::max(worst, std::abs(RowNorm(m.row(i)) - 1.0));
  }
  std::cout << "rows " << m.rows() << "\ndim " << m.dim() << "\nnormalized "
            << (m.normalized() ? 1 : 0) << "\nmax_norm_deviation "
            << FormatDouble(worst) << '\n';
  return kExitOk;
}

int CmdRescore(const RescoreConfig& config) {
  RescoreInputs in = LoadRescoreInputs(config);
  ClassMap class_map(in.gt.categories);
  RescoreResult result =
      RescoreDetections(in.detections, in.image, in.text, class_map,
                        config.sim, MakeFusion(config, in.gt, config.c));
  WriteFile(config.output, SerializeResults(result.detections));
  std::cout << "rescored " << result.rescored << "\npassed_through "
            << result.passed_through << '\n';
  return kExitOk;
}

int CmdEval(const EvalConfig& config) {
  AnnotationSet gt = ParseAnnotations(config.gt);
  EvalOptions options;
  options.max_dets = config.max_dets;
  options.partition =
      ResolvePartition(gt, config.base_classes, config.novel_classes);
  const fs::path dir = config.out_dir;

  std::vector<Detection> dets = ParseResults(config.results);
  ApReport report = CocoMap(dets, gt, options);
  WriteWith(dir / "report.json", [&](auto& os) { WriteReportJson(report, os); });
  WriteWith(dir / "report.csv", [&](auto& os) { WriteReportCsv(report, os); });
  std::cout << "AP " << FormatDouble(report.mean.ap) << "\nAP50 "
            << FormatDouble(report.mean.ap50) << '\n';
  if (report.novel) std::cout << "nAP " << FormatDouble(report.novel->ap) << '\n';

  if (!config.compare.empty()) {
    std::vector<Detection> other = ParseResults(config.compare);
    ApReport report_b = CocoMap(other, gt, options);
    WriteWith(dir / "report_compare.json",
              [&](auto& os) { WriteReportJson(report_b, os); });
    WriteWith(dir / "report_compare.csv",
              [&](auto& os) { WriteReportCsv(report_b, os); });
    WriteWith(dir / "compare.csv",
              [&](auto& os) { WriteCompareCsv(report, report_b, os); });
    std::cout << "delta_AP " << FormatDouble(report_b.mean.ap - report.mean.ap)
              << '\n';
  }
  return kExitOk;
}

int CmdSweepC(const SweepConfig& config) {
  RescoreInputs in = LoadRescoreInputs(config.rescore);
  ClassMap class_map(in.gt.categories);
  EvalOptions options;
  options.partition = ResolvePartition(in.gt, {}, config.novel_classes);
  std::vector<double> grid =
      config.grid.empty() ? LinearGrid(0.0, 1.0, config.steps) : config.grid;

  std::ostringstream csv;
  csv << "c,nAP,nAP50\n";
  Series ap{"nAP", {}};
  Series ap50{"nAP50", {}};
  for (double c : grid) {
    RescoreResult result = RescoreDetections(
        in.detections, in.image, in.text, class_map, config.rescore.sim,
        MakeFusion(config.rescore, in.gt, c));
    ApReport report = CocoMap(result.detections, in.gt, options);
    const ApSummary& s = report.novel ? *report.novel : report.mean;
    csv << FormatDouble(c) << ',' << FormatDouble(s.ap) << ','
        << FormatDouble(s.ap50) << '\n';
    ap.points.emplace_back(c, s.ap);
    ap50.points.emplace_back(c, s.ap50);
  }
  WriteFile(config.rescore.output, csv.str());
  if (!config.svg.empty()) {
    WriteWith(config.svg, [&](auto& os) { WriteLineSvg({ap, ap50}, "c", "AP", os); });
  }
  std::cout << "points " << grid.size() << '\n';
  return kExitOk;
}

int CmdMonotonicity(const MonotonicityConfig& config) {
  if (config.random_trials > 0) {
    std::mt19937_64 rng(config.seed);
    std::uniform_int_distribution<std::size_t> n_dist(config.min_n, config.max_n);
    std::ostringstream csv;
    csv << "trial,n,alpha_max,passed\n";
    std::size_t failures = 0;
    for (std::size_t t = 0; t < config.random_trials; ++t) {
      std::size_t n = n_dist(rng);
      std::vector<double> noise =
          RandomZeroSumNoise(n, 1.0 / static_cast<double>(n), rng);
      double bound = MaxNoiseAlpha(n, noise);
      double hi = std::isfinite(bound) ? 0.99 * bound : 1.0;
      MonotonicityReport report =
          VerifyMonotonicity(n, noise, LinearGrid(0.0, hi, config.points));
      if (!report.passed) ++failures;
      csv << t << ',' << n << ',' << FormatDouble(hi) << ','
          << (report.passed ? 1 : 0) << '\n';
    }
    WriteFile(config.output, csv.str());
    std::cout << "trials " << config.random_trials << "\nfailures " << failures
              << '\n';
    return failures == 0 ? kExitOk : kExitCheckFailed;
  }

  const std::size_t n = config.n != 0 ? config.n : config.noise.size();
  std::vector<double> grid = config.alpha_grid;
  if (grid.empty()) {
    double hi = config.alpha_max.value_or(0.0);
    if (!config.alpha_max) {
      double bound = MaxNoiseAlpha(n, config.noise);
      hi = std::isfinite(bound) ? 0.99 * bound : 1.0;
    }
    grid = LinearGrid(0.0, hi, config.points);
  }
  MonotonicityReport report = VerifyMonotonicity(n, config.noise, grid);
  WriteWith(config.output, [&](auto& os) { WriteMonotonicityCsv(report, os); });
  if (!config.svg.empty()) {
    Series s{"mirror sum", report.points};
    WriteWith(config.svg, [&](auto& os) { WriteLineSvg({s}, "alpha", "mirror sum", os); });
  }
  std::cout << (report.passed ? "PASS" : "FAIL") << " monotonic over "
            << report.points.size() << " points\n";
  return report.passed ? kExitOk : kExitCheckFailed;
}

int CmdKShot(const KShotConfig& config) {
  AnnotationSet gt = ParseAnnotations(config.gt);
  std::vector<ClassId> classes(config.classes.begin(), config.classes.end());
  if (classes.empty()) {
    for (const auto& cat : gt.categories) classes.push_back(cat.id);
  }
  for (std::uint64_t seed : config.seeds) {
    KShotSeed sampled = SampleKShot(gt, config.k, classes, seed);
    fs::path path = fs::path(config.out_dir) /
                    ("kshot_k" + std::to_string(config.k) + "_seed" +
                     std::to_string(seed) + ".json");
    WriteFile(path, SerializeSeed(sampled));
    std::cout << path.filename().string() << " images "
              << sampled.subset.images.size() << " annotations "
              << sampled.subset.annotations.size() << '\n';
  }
  return kExitOk;
}

int CmdMissing(const MissingConfig& config) {
  AnnotationSet gt = ParseAnnotations(config.gt);
  std::map<ClassId, std::vector<double>> per_class;
  std::set<std::string> stems;
  for (const auto& file : config.seed_files) {
    AnnotationSet subset = ParseAnnotations(file);
    MissingStats stats = MissingAnnotationStats(gt, subset);
    std::string stem = fs::path(file).stem().string();
    if (!stems.insert(stem).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "seed files must have distinct names: " + stem);
    }
    WriteWith(fs::path(config.out_dir) / ("missing_" + stem + ".csv"),
              [&](auto& os) { WriteMissingCsv(stats, gt.categories, os); });
    std::size_t total = 0;
    for (const auto& [cls, count] : stats.per_class) {
      per_class[cls].push_back(static_cast<double>(count));
      total += count;
    }
    std::cout << stem << " missing " << total << '\n';
  }
  if (config.seed_files.size() >= 2) {
    std::map<ClassId, ConfidenceInterval> rows;
    for (const auto& [cls, values] : per_class) rows[cls] = AggregateCi(values);
    WriteWith(fs::path(config.out_dir) / "missing_aggregate.csv",
              [&](auto& os) { WriteAggregateCsv(rows, os); });
  }
  return kExitOk;
}

int CmdLossCheck(const LossCheckConfig& config) {
  LossCheckReport report = RunLossChecks(config.options);
  auto line = [](bool ok, const char* name, double value, double tol) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << " max=" << FormatDouble(value)
              << " tol=" << FormatDouble(tol) << '\n';
  };
  line(report.focal_ok, "focal_reduction", report.max_focal_diff,
       kReductionTolerance);
  line(report.ce_ok, "cross_entropy_reduction", report.max_ce_diff,
       kReductionTolerance);
  line(report.gradient_ok, "gradient_vs_finite_difference",
       report.max_gradient_rel_error, kGradientTolerance);
  return report.passed() ? kExitOk : kExitCheckFailed;
}

}  // namespace riscore::tools
