// Copyright 2026 The riscore Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef RISCORE_TOOLS_COMMANDS_H_
#define RISCORE_TOOLS_COMMANDS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "riscore/bnrl.h"
#include "riscore/embedding.h"
#include "riscore/rescore.h"

namespace riscore::tools {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitCheckFailed = 3;

struct EmbeddingsConfig {
  std::string input;
};

struct RescoreConfig {
  std::string results;
  std::string image_embs;
  std::string text_embs;
  std::string gt;
  std::string output;
  SimilarityParams sim;
  double c = 0.7;
  bool skip_base = false;
  std::vector<int> base_classes;
};

struct EvalConfig {
  std::string gt;
  std::string results;
  std::string compare;
  std::string out_dir;
  std::optional<std::size_t> max_dets;
  std::vector<int> base_classes;
  std::vector<int> novel_classes;
};

struct SweepConfig {
  RescoreConfig rescore;
  std::vector<double> grid;
  std::size_t steps = 11;
  std::vector<int> novel_classes;
  std::string svg;
};

struct MonotonicityConfig {
  std::size_t n = 0;
  std::vector<double> noise;
  std::vector<double> alpha_grid;
  std::size_t points = 50;
  std::optional<double> alpha_max;
  std::size_t random_trials = 0;
  std::size_t min_n = 2;
  std::size_t max_n = 20;
  std::uint64_t seed = 0;
  std::string output;
  std::string svg;
};

struct KShotConfig {
  std::string gt;
  std::size_t k = 10;
  std::vector<int> classes;
  std::vector<std::uint64_t> seeds = {0};
  std::string out_dir;
};

struct MissingConfig {
  std::string gt;
  std::vector<std::string> seed_files;
  std::string out_dir;
};

struct LossCheckConfig {
  LossCheckOptions options;
};

int CmdEmbeddings(const EmbeddingsConfig& config);
int CmdRescore(const RescoreConfig& config);
int CmdEval(const EvalConfig& config);
int CmdSweepC(const SweepConfig& config);
int CmdMonotonicity(const MonotonicityConfig& config);
int CmdKShot(const KShotConfig& config);
int CmdMissing(const MissingConfig& config);
int CmdLossCheck(const LossCheckConfig& config);

}  // namespace riscore::tools

#endif  // RISCORE_TOOLS_COMMANDS_H_
