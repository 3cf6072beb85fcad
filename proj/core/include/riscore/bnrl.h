// Copyright 2026 The riscore Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Background Negative Re-scale Loss.
//
// Per class, with one-hot target t(c):
//
//   L_c = -beta * t(c) * (1 - p)^gamma * log(p)
//         -(1 - beta) * (1 - t(c)) * p^epsilon * log(1 - p)
//
// and the total sums L_c over foreground classes plus omega_bg * L_bg.
// The second summand is the "mirror" term; it grows as wrong-class mass
// concentrates, which the noise-distribution helpers below check
// numerically.

#ifndef RISCORE_BNRL_H_
#define RISCORE_BNRL_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace riscore {

struct BnrlParams {
  double beta = 0.2;
  double gamma = 4.0;
  double epsilon = 1.0;
  double omega_bg = 0.2;
  // Index of the background class in a distribution, if it has one.
  std::optional<std::size_t> bg_class;

  void Validate() const;
};

// Probabilities are clamped to [kProbClamp, 1 - kProbClamp] before logs.
inline constexpr double kProbClamp = 1e-12;

class ClassDistribution {
 public:
  // Throws kInvalidArgument unless entries lie in [0,1], sum to 1 within
  // 1e-6 and gt_class is a valid index.
  ClassDistribution(std::vector<double> probs, std::size_t gt_class);

  const std::vector<double>& probs() const { return probs_; }
  std::size_t gt_class() const { return gt_class_; }
  std::size_t size() const { return probs_.size(); }

 private:
  std::vector<double> probs_;
  std::size_t gt_class_;
};

double BnrlPerClass(double p, bool is_gt, const BnrlParams& params);

// d L_c / d p for the same branch as BnrlPerClass.
double BnrlPerClassDerivative(double p, bool is_gt, const BnrlParams& params);

double BnrlTotal(const ClassDistribution& dist, const BnrlParams& params);

// Partial derivatives of BnrlTotal with respect to each probability,
// treating them as independent inputs.
std::vector<double> BnrlGradient(const ClassDistribution& dist,
                                 const BnrlParams& params);

// Unbalanced focal loss on the ground-truth probability; cross-entropy
// when gamma is zero.
double FocalLoss(double p_gt, double gamma);

// p(c) = 1/N + alpha * x_c. The noise must sum to zero within 1e-9 and
// every component must stay inside (0, 1), otherwise kOutOfRange.
std::vector<double> NoiseDistribution(std::size_t n,
                                      std::span<const double> noise,
                                      double alpha);

// Largest alpha for which every component of NoiseDistribution stays
// inside (0, 1) (exclusive bound; infinity for all-zero noise).
double MaxNoiseAlpha(std::size_t n, std::span<const double> noise);

// -sum_c log(1 - p(c)); every p(c) must lie in (0, 1).
double MirrorSum(std::span<const double> p);

struct MonotonicityReport {
  std::vector<std::pair<double, double>> points;  // (alpha, mirror sum)
  bool passed = false;
};

inline constexpr double kMonotonicitySlack = 1e-12;

// Evaluates MirrorSum(NoiseDistribution(n, noise, alpha)) over a strictly
// increasing grid and passes iff the sequence never drops by more than
// kMonotonicitySlack.
MonotonicityReport VerifyMonotonicity(std::size_t n,
                                      std::span<const double> noise,
                                      std::span<const double> alpha_grid);

// "alpha,mirror_sum" CSV with 17 significant digits.
void WriteMonotonicityCsv(const MonotonicityReport& report, std::ostream& out);

// Zero-sum noise vector of length n with entries drawn from [-scale, scale]
// and recentred.
std::vector<double> RandomZeroSumNoise(std::size_t n, double scale,
                                       std::mt19937_64& rng);

// Random distribution over n classes with every component in
// [min_prob, 1 - min_prob]; rejection-samples a flat Dirichlet.
std::vector<double> RandomDistribution(std::size_t n, double min_prob,
                                       std::mt19937_64& rng);

// Self-check of the loss: reduction identities and gradient against
// central finite differences, over seeded random distributions.
struct LossCheckOptions {
  std::size_t reduction_trials = 10000;
  std::size_t gradient_trials = 1000;
  std::size_t min_classes = 2;
  std::size_t max_classes = 20;
  double fd_step = 1e-6;
  // Random distributions keep every probability in [min_prob, 1-min_prob].
  double min_prob = 1e-3;
  std::uint64_t seed = 0;
  BnrlParams params;
};

struct LossCheckReport {
  double max_focal_diff = 0.0;
  double max_ce_diff = 0.0;
  double max_gradient_rel_error = 0.0;
  bool focal_ok = false;
  bool ce_ok = false;
  bool gradient_ok = false;
  bool passed() const { return focal_ok && ce_ok && gradient_ok; }
};

inline constexpr double kReductionTolerance = 1e-12;
inline constexpr double kGradientTolerance = 1e-5;

LossCheckReport RunLossChecks(const LossCheckOptions& options);

}  // namespace riscore

#endif  // RISCORE_BNRL_H_
