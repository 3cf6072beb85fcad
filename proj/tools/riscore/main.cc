// Copyright 2026 The riscore Authors.
// SPDX-License-Identifier: Apache-2.0
//
// riscore: detection re-scoring, evaluation and loss checks.

#include <exception>
#include <functional>
#include <iostream>

#include "CLI11.hpp"
#include "commands.h"
#include "riscore/error.h"

namespace {

using namespace riscore::tools;

void AddRescoreInputs(CLI::App* cmd, RescoreConfig& c) {
  cmd->add_option("--results", c.results, "COCO results JSON")->required();
  cmd->add_option("--image-embs", c.image_embs,
                  "RISF-EMB detection embeddings keyed by det_id")->required();
  cmd->add_option("--text-embs", c.text_embs,
                  "RISF-EMB class-name embeddings")->required();
  cmd->add_option("--gt", c.gt, "COCO annotations (categories define columns)")
      ->required();
  cmd->add_option("--tau", c.sim.tau, "softmax temperature")
      ->capture_default_str();
  cmd->add_flag("--skip-base", c.skip_base, "keep detector scores for base classes");
  cmd->add_option("--base-classes", c.base_classes,
                  "base class ids (default: categories with split=base)")
      ->delimiter(',');
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"riscore: detection re-scoring, evaluation and loss checks"};
  app.set_config("--config", "", "key=value config file; flags take precedence");
  app.require_subcommand(1);
  app.fallthrough();

  EmbeddingsConfig emb;
  auto* emb_cmd = app.add_subcommand("embeddings", "Validate a RISF-EMB file");
  emb_cmd->add_option("input", emb.input, "embedding file")->required();

  RescoreConfig rescore;
  auto* rescore_cmd = app.add_subcommand("rescore", "Fuse detector and similarity scores");
  AddRescoreInputs(rescore_cmd, rescore);
  rescore_cmd->add_option("--c", rescore.c, "detector weight in [0,1]")
      ->capture_default_str();
  rescore_cmd->add_option("-o,--output", rescore.output, "rescored results JSON")
      ->required();

  EvalConfig eval;
  auto* eval_cmd = app.add_subcommand("eval", "COCO AP / AP50 evaluation");
  eval_cmd->add_option("--gt", eval.gt, "COCO annotations")->required();
  eval_cmd->add_option("--results", eval.results, "COCO results JSON")->required();
  eval_cmd->add_option("--compare", eval.compare,
                       "second results file; writes compare.csv (second - first)");
  eval_cmd->add_option("--out-dir", eval.out_dir, "output directory")->required();
  eval_cmd->add_option("--max-dets", eval.max_dets, "per image/class detection cap");
  eval_cmd->add_option("--base-classes", eval.base_classes)->delimiter(',');
  eval_cmd->add_option("--novel-classes", eval.novel_classes)->delimiter(',');

  SweepConfig sweep;
  auto* sweep_cmd = app.add_subcommand("sweep-c", "nAP as a function of the fusion weight");
  AddRescoreInputs(sweep_cmd, sweep.rescore);
  sweep_cmd->add_option("--grid", sweep.grid, "explicit c values")->delimiter(',');
  sweep_cmd->add_option("--steps", sweep.steps, "evenly spaced c values in [0,1]")
      ->capture_default_str();
  sweep_cmd->add_option("--novel-classes", sweep.novel_classes)->delimiter(',');
  sweep_cmd->add_option("-o,--output", sweep.rescore.output, "CSV c,nAP,nAP50")
      ->required();
  sweep_cmd->add_option("--svg", sweep.svg, "optional SVG plot");

  MonotonicityConfig mono;
  auto* mono_cmd = app.add_subcommand("monotonicity",
                                      "Mirror-term growth under noise scaling");
  mono_cmd->add_option("--n", mono.n, "class count (default: noise length)");
  mono_cmd->add_option("--noise", mono.noise, "zero-sum noise vector")->delimiter(',');
  mono_cmd->add_option("--alpha-grid", mono.alpha_grid, "explicit alphas")
      ->delimiter(',');
  mono_cmd->add_option("--points", mono.points, "grid size when no explicit grid")
      ->capture_default_str();
  mono_cmd->add_option("--alpha-max", mono.alpha_max,
                       "grid upper end (default 0.99 of the valid bound)");
  mono_cmd->add_option("--random", mono.random_trials,
                       "random zero-sum noise trials instead of --noise");
  mono_cmd->add_option("--min-n", mono.min_n)->capture_default_str();
  mono_cmd->add_option("--max-n", mono.max_n)->capture_default_str();
  mono_cmd->add_option("--seed", mono.seed)->capture_default_str();
  mono_cmd->add_option("-o,--output", mono.output, "CSV output")->required();
  mono_cmd->add_option("--svg", mono.svg, "optional SVG plot");

  KShotConfig kshot;
  auto* kshot_cmd = app.add_subcommand("kshot", "Sample k-shot subsets");
  kshot_cmd->add_option("--gt", kshot.gt, "COCO annotations")->required();
  kshot_cmd->add_option("--k", kshot.k, "instances per class")->capture_default_str();
  kshot_cmd->add_option("--classes", kshot.classes, "class ids (default: all)")
      ->delimiter(',');
  kshot_cmd->add_option("--seeds", kshot.seeds, "rng seeds")->delimiter(',');
  kshot_cmd->add_option("--out-dir", kshot.out_dir)->required();

  MissingConfig missing;
  auto* missing_cmd = app.add_subcommand("missing", "Missing-annotation statistics");
  missing_cmd->add_option("--gt", missing.gt, "full COCO annotations")->required();
  missing_cmd->add_option("--seed-files", missing.seed_files, "k-shot subset files")
      ->required();
  missing_cmd->add_option("--out-dir", missing.out_dir)->required();

  LossCheckConfig loss;
  auto* loss_cmd = app.add_subcommand("loss-check",
                                      "Loss reduction identities and gradient check");
  auto& lo = loss.options;
  loss_cmd->add_option("--seed", lo.seed)->capture_default_str();
  loss_cmd->add_option("--reduction-trials", lo.reduction_trials)->capture_default_str();
  loss_cmd->add_option("--gradient-trials", lo.gradient_trials)->capture_default_str();
  loss_cmd->add_option("--beta", lo.params.beta)->capture_default_str();
  loss_cmd->add_option("--gamma", lo.params.gamma)->capture_default_str();
  loss_cmd->add_option("--epsilon", lo.params.epsilon)->capture_default_str();
  loss_cmd->add_option("--omega-bg", lo.params.omega_bg)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  std::function<int()> run;
  if (*emb_cmd) run = [&] { return CmdEmbeddings(emb); };
  if (*rescore_cmd) run = [&] { return CmdRescore(rescore); };
  if (*eval_cmd) run = [&] { return CmdEval(eval); };
  if (*sweep_cmd) run = [&] { return CmdSweepC(sweep); };
  if (*mono_cmd) run = [&] { return CmdMonotonicity(mono); };
  if (*kshot_cmd) run = [&] { return CmdKShot(kshot); };
  if (*missing_cmd) run = [&] { return CmdMissing(missing); };
  if (*loss_cmd) run = [&] { return CmdLossCheck(loss); };

  try {
    return run();
  } catch (const riscore::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
}
