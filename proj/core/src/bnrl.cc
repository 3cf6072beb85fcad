// Copyright 2026 The riscore Authors.
// SPDX-License-Identifier: Apache-2.0

#include "riscore/bnrl.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <string>

#include "riscore/error.h"

namespace riscore {
namespace {

constexpr double kDistributionSumTolerance = 1e-6;
constexpr double kNoiseSumTolerance = 1e-9;

double Clamp(double p) { return std::clamp(p, kProbClamp, 1.0 - kProbClamp); }

// Weight of class c in the total: omega_bg for background, 1 otherwise.
double ClassWeight(std::size_t c, const BnrlParams& params) {
  return params.bg_class && *params.bg_class == c ? params.omega_bg : 1.0;
}

double RelativeError(double a, double b) {
  double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace

void BnrlParams::Validate() const {
  if (!std::isfinite(beta) || !std::isfinite(gamma) ||
      !std::isfinite(epsilon) || !std::isfinite(omega_bg)) {
    throw Error(ErrorCode::kInvalidArgument, "BNRL parameters must be finite");
  }
  if (beta < 0.0 || beta > 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "beta must be in [0, 1]");
  }
  if (gamma < 0.0 || epsilon < 0.0 || omega_bg < 0.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "gamma, epsilon and omega_bg must be non-negative");
  }
}

ClassDistribution::ClassDistribution(std::vector<double> probs,
                                     std::size_t gt_class)
    : probs_(std::move(probs)), gt_class_(gt_class) {
  if (probs_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty class distribution");
  }
  if (gt_class_ >= probs_.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "ground-truth class " + std::to_string(gt_class_) +
                    " out of range");
  }
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "class probabilities must lie in [0, 1]");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kDistributionSumTolerance) {
    throw Error(ErrorCode::kInvalidArgument,
                "class probabilities sum to " + std::to_string(sum));
  }
}

double BnrlPerClass(double p, bool is_gt, const BnrlParams& params) {
  p = Clamp(p);
  if (is_gt) {
    return -params.beta * std::pow(1.0 - p, params.gamma) * std::log(p);
  }
  return -(1.0 - params.beta) * std::pow(p, params.epsilon) * std::log1p(-p);
}

double BnrlPerClassDerivative(double p, bool is_gt, const BnrlParams& params) {
  p = Clamp(p);
  if (is_gt) {
    // d/dp [-(1-p)^g log p] = g (1-p)^(g-1) log p - (1-p)^g / p
    double q = 1.0 - p;
    double lead = params.gamma == 0.0
                      ? 0.0
                      : params.gamma * std::pow(q, params.gamma - 1.0) *
                            std::log(p);
    return params.beta * (lead - std::pow(q, params.gamma) / p);
  }
  // d/dp [-p^e log(1-p)] = p^e / (1-p) - e p^(e-1) log(1-p)
  double lead = params.epsilon == 0.0
                    ? 0.0
                    : params.epsilon * std::pow(p, params.epsilon - 1.0) *
                          std::log1p(-p);
  return (1.0 - params.beta) * (std::pow(p, params.epsilon) / (1.0 - p) - lead);
}

double BnrlTotal(const ClassDistribution& dist, const BnrlParams& params) {
  params.Validate();
  if (params.bg_class && *params.bg_class >= dist.size()) {
    throw Error(ErrorCode::kInvalidArgument, "background class out of range");
  }
  double total = 0.0;
  for (std::size_t c = 0; c < dist.size(); ++c) {
    total += ClassWeight(c, params) *
             BnrlPerClass(dist.probs()[c], c == dist.gt_class(), params);
  }
  return total;
}

std::vector<double> BnrlGradient(const ClassDistribution& dist,
                                 const BnrlParams& params) {
  params.Validate();
  if (params.bg_class && *params.bg_class >= dist.size()) {
    throw Error(ErrorCode::kInvalidArgument, "background class out of range");
  }
  std::vector<double> grad(dist.size());
  for (std::size_t c = 0; c < dist.size(); ++c) {
    grad[c] = ClassWeight(c, params) *
              BnrlPerClassDerivative(dist.probs()[c], c == dist.gt_class(),
                                     params);
  }
  return grad;
}

double FocalLoss(double p_gt, double gamma) {
  p_gt = Clamp(p_gt);
  return -std::pow(1.0 - p_gt, gamma) * std::log(p_gt);
}

std::vector<double> NoiseDistribution(std::size_t n,
                                      std::span<const double> noise,
                                      double alpha) {
  if (n == 0 || noise.size() != n) {
    throw Error(ErrorCode::kInvalidArgument,
                "noise vector must have one entry per class");
  }
  double sum = std::accumulate(noise.begin(), noise.end(), 0.0);
  if (std::abs(sum) > kNoiseSumTolerance) {
    throw Error(ErrorCode::kInvalidArgument, "noise must sum to zero");
  }
  const double uniform = 1.0 / static_cast<double>(n);
  std::vector<double> p(n);
  for (std::size_t c = 0; c < n; ++c) {
    p[c] = uniform + alpha * noise[c];
    if (!(p[c] > 0.0 && p[c] < 1.0)) {
      throw Error(ErrorCode::kOutOfRange,
                  "alpha " + std::to_string(alpha) + " pushes class " +
                      std::to_string(c) + " outside (0, 1)");
    }
  }
  return p;
}

double MaxNoiseAlpha(std::size_t n, std::span<const double> noise) {
  const double uniform = 1.0 / static_cast<double>(n);
  double bound = std::numeric_limits<double>::infinity();
  for (double x : noise) {
    if (x > 0.0) bound = std::min(bound, (1.0 - uniform) / x);
    if (x < 0.0) bound = std::min(bound, uniform / -x);
  }
  return bound;
}

double MirrorSum(std::span<const double> p) {
  double sum = 0.0;
  for (double v : p) {
    if (!(v > 0.0 && v < 1.0)) {
      throw Error(ErrorCode::kOutOfRange, "mirror sum needs p in (0, 1)");
    }
    sum -= std::log1p(-v);
  }
  return sum;
}

MonotonicityReport VerifyMonotonicity(std::size_t n,
                                      std::span<const double> noise,
                                      std::span<const double> alpha_grid) {
  for (std::size_t i = 1; i < alpha_grid.size(); ++i) {
    if (!(alpha_grid[i] > alpha_grid[i - 1])) {
      throw Error(ErrorCode::kInvalidArgument,
                  "alpha grid must be strictly increasing");
    }
  }
  MonotonicityReport report;
  report.passed = true;
  report.points.reserve(alpha_grid.size());
  for (double alpha : alpha_grid) {
    double value = MirrorSum(NoiseDistribution(n, noise, alpha));
    if (!report.points.empty() &&
        value < report.points.back().second - kMonotonicitySlack) {
      report.passed = false;
    }
    report.points.emplace_back(alpha, value);
  }
  return report;
}

void WriteMonotonicityCsv(const MonotonicityReport& report, std::ostream& out) {
  out << "alpha,mirror_sum\n";
  char line[64];
  for (const auto& [alpha, value] : report.points) {
    std::snprintf(line, sizeof(line), "%.17g,%.17g\n", alpha, value);
    out << line;
  }
}

std::vector<double> RandomZeroSumNoise(std::size_t n, double scale,
                                       std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-scale, scale);
  std::vector<double> x(n);
  for (double& v : x) v = unit(rng);
  double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  for (double& v : x) v -= mean;
  return x;
}

std::vector<double> RandomDistribution(std::size_t n, double min_prob,
                                       std::mt19937_64& rng) {
  if (n == 0 || min_prob * static_cast<double>(n) >= 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "cannot satisfy min_prob");
  }
  std::exponential_distribution<double> gamma1(1.0);
  std::vector<double> p(n);
  for (;;) {
    double total = 0.0;
    for (double& v : p) {
      v = gamma1(rng);
      total += v;
    }
    bool ok = true;
    for (double& v : p) {
      v /= total;
      ok = ok && v >= min_prob && v <= 1.0 - min_prob;
    }
    if (ok) return p;
  }
}

LossCheckReport RunLossChecks(const LossCheckOptions& options) {
  options.params.Validate();
  if (options.min_classes < 2 || options.max_classes < options.min_classes) {
    throw Error(ErrorCode::kInvalidArgument, "bad class-count range");
  }
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<std::size_t> n_dist(options.min_classes,
                                                    options.max_classes);
  LossCheckReport report;

  // Reductions: beta = omega_bg = 1 leaves only the ground-truth branch.
  BnrlParams reduced = options.params;
  reduced.beta = 1.0;
  reduced.omega_bg = 1.0;
  BnrlParams ce = reduced;
  ce.gamma = 0.0;
  for (std::size_t t = 0; t < options.reduction_trials; ++t) {
    std::size_t n = n_dist(rng);
    std::vector<double> probs = RandomDistribution(n, 0.0, rng);
    std::size_t gt = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    reduced.bg_class = n - 1;
    ce.bg_class = n - 1;
    ClassDistribution dist(probs, gt);
    report.max_focal_diff =
        std::max(report.max_focal_diff,
                 std::abs(BnrlTotal(dist, reduced) -
                          FocalLoss(probs[gt], reduced.gamma)));
    report.max_ce_diff = std::max(
        report.max_ce_diff,
        std::abs(BnrlTotal(dist, ce) + std::log(std::max(probs[gt], kProbClamp))));
  }

  // Gradient: the loss is a sum of per-class terms, so each partial is the
  // central difference of that class's weighted term.
  const double h = options.fd_step;
  BnrlParams params = options.params;
  for (std::size_t t = 0; t < options.gradient_trials; ++t) {
    std::size_t n = n_dist(rng);
    std::vector<double> probs = RandomDistribution(n, options.min_prob, rng);
    std::size_t gt = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    params.bg_class = n - 1;
    ClassDistribution dist(probs, gt);
    std::vector<double> grad = BnrlGradient(dist, params);
    for (std::size_t c = 0; c < n; ++c) {
      double w = ClassWeight(c, params);
      bool is_gt = c == gt;
      double fd = w *
                  (BnrlPerClass(probs[c] + h, is_gt, params) -
                   BnrlPerClass(probs[c] - h, is_gt, params)) /
                  (2.0 * h);
      report.max_gradient_rel_error =
          std::max(report.max_gradient_rel_error, RelativeError(grad[c], fd));
    }
  }

  report.focal_ok = report.max_focal_diff < kReductionTolerance;
  report.ce_ok = report.max_ce_diff < kReductionTolerance;
  report.gradient_ok = report.max_gradient_rel_error < kGradientTolerance;
  return report;
}

}  // namespace riscore
