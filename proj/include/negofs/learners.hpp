// Copyright 2026 The negofs Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "negofs/random.hpp"
#include "negofs/sparse_vector.hpp"
#include "negofs/timing.hpp"

namespace negofs {

// Truncation-based online learners. The first three follow the classic
// online feature selection baselines (perceptron with truncation, random
// selection, sparse projection); the rest are first- and second-order linear
// learners whose weights are truncated to the budget after every update.
enum class Variant {
  kPetrun,
  kRand,
  kFofs,
  kOgd,
  kPa,
  kRomma,
  kAlma,
  kSop,
  kCw,
  kArow,
  kScw,
};

inline constexpr Variant kAllVariants[] = {
    Variant::kPetrun, Variant::kRand, Variant::kFofs, Variant::kOgd,
    Variant::kPa,     Variant::kRomma, Variant::kAlma, Variant::kSop,
    Variant::kCw,     Variant::kArow, Variant::kScw};

std::string_view variant_name(Variant v);
// Case-insensitive; throws std::invalid_argument listing valid names.
Variant parse_variant(std::string_view name);
bool is_second_order(Variant v);

struct LearnerConfig {
  Variant variant = Variant::kPetrun;
  Budget budget{1};
  double eta = 0.2;
  double lambda = 0.01;
  double r = 1.0;
  double confidence = 0.7;
  double C = 1.0;
  double alpha_margin = 0.9;
  // FOFS updates on y*w.x < 1 instead of on mistakes.
  bool fofs_margin_trigger = false;
  std::uint64_t seed = 0;
  Timing timing = Timing::kThreadCpu;

  void validate(std::size_t dimension) const;
};

struct Prediction {
  int sign;
  double margin;
};

struct LearnerState {
  SparseVector w;
  // Per-dimension diagonal covariance; empty for first-order variants.
  std::vector<double> sigma;
  std::size_t mistakes = 0;
  double cumulative_time = 0.0;
  std::size_t t = 1;
  std::size_t updates = 0;
  // ALMA's update counter k.
  std::size_t alma_k = 1;
  Rng rng;

  friend bool operator==(const LearnerState&, const LearnerState&) = default;
};

LearnerState initial_state(const LearnerConfig& cfg, std::size_t dimension);

// sgn(0) = -1.
inline int sign_of(double margin) { return margin > 0.0 ? +1 : -1; }

Prediction predict(const LearnerState& state, const SparseVector& x);

// Update rules. Each applies one variant's rule for the labeled instance
// (x, y) and returns whether the weights or covariance changed. Mistake
// counting lives in step().
bool update_petrun(LearnerState& s, const LearnerConfig& cfg,
                   const SparseVector& x, int y);
bool update_rand(LearnerState& s, const LearnerConfig& cfg,
                 const SparseVector& x, int y);
bool update_fofs(LearnerState& s, const LearnerConfig& cfg,
                 const SparseVector& x, int y);
// OGD, PA, ROMMA, ALMA.
bool update_first_order(LearnerState& s, const LearnerConfig& cfg,
                        const SparseVector& x, int y);
// SOP, CW, AROW, SCW.
bool update_second_order(LearnerState& s, const LearnerConfig& cfg,
                         const SparseVector& x, int y);

// Predict with the pre-update weights, count a mistake when the sign
// disagrees with y, dispatch the update and time it.
Prediction step(LearnerState& s, const LearnerConfig& cfg,
                const SparseVector& x, int y);

// Owns one learner's configuration and state.
class Learner {
 public:
  Learner(LearnerConfig cfg, std::size_t dimension);

  const LearnerConfig& config() const { return cfg_; }
  const LearnerState& state() const { return state_; }
  std::size_t dimension() const { return state_.w.dimension(); }

  Prediction predict(const SparseVector& x) const {
    return negofs::predict(state_, x);
  }
  Prediction step(const SparseVector& x, int y) {
    return negofs::step(state_, cfg_, x, y);
  }
  // Replaces the weights; covariance and counters are kept.
  void set_weights(SparseVector w);

 private:
  LearnerConfig cfg_;
  LearnerState state_;
};

// Inverse standard normal CDF used by the confidence-weighted variants.
double normal_quantile(double p);

}  // namespace negofs
