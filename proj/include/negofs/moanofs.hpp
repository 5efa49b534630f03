// Copyright 2026 The negofs Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "negofs/dataset.hpp"
#include "negofs/learners.hpp"
#include "negofs/negotiation.hpp"
#include "negofs/trust.hpp"
#include "negofs/utility.hpp"

namespace negofs {

struct SystemConfig {
  // Learner configurations; budgets are replaced by the budget fraction rule.
  std::vector<LearnerConfig> roster;
  std::size_t k = 3;
  double budget_fraction = 0.1;
  // Trials of the Level-2 negotiation; 0 means one trial per instance.
  std::size_t t_max = 10;
  double calibration_fraction = 0.2;
  IssueWeightProfile issue_weights;
  TrustParams trust_params;
  ConflictRule conflict_rule = ConflictRule::kMinError;
  // 0 keeps the defaults of NegotiationConfig.
  double epsilon = 0.0;
  std::size_t merged_budget = 0;
  double pressure_beta = 1.0;
  Timing timing = Timing::kThreadCpu;
  SystemPrediction prediction = SystemPrediction::kLeader;
  std::uint64_t seed = 0;

  void validate() const;
};

// The nine first- and second-order learners used as the default roster.
std::vector<LearnerConfig> default_roster(std::uint64_t seed = 0,
                                          Timing timing = Timing::kThreadCpu);

struct LearnerReport {
  int id = 0;
  Variant variant = Variant::kPetrun;
  std::size_t mistakes = 0;
  std::size_t instances = 0;
  double error_rate = 0.0;
  double cumulative_time = 0.0;
  double direct_trust = 0.0;
  bool elected = false;
};

struct RunReport {
  std::vector<LearnerReport> learners;
  std::vector<int> elected;
  std::vector<TrialMetrics> trials;
  SparseVector merged;
  NegotiationTranscript transcript;
  Budget budget{1};
  ConflictRule conflict_rule = ConflictRule::kMinError;
  // Stream positions consumed by each level.
  std::vector<std::size_t> calibration_instances;
  std::vector<std::size_t> negotiation_instances;
  bool calibration_window_shrunk = false;
  std::size_t calibration_window = 0;
  std::size_t system_mistakes = 0;
  std::size_t system_instances = 0;
  // Update and merge cost time (per the configured timing).
  double cost_time = 0.0;
  double wall_time = 0.0;

  double error_rate() const {
    return system_instances == 0 ? 0.0
                                 : static_cast<double>(system_mistakes) /
                                       static_cast<double>(system_instances);
  }
};

struct LearnerStanding {
  int id;
  double trust;
  std::size_t mistakes;
  double cumulative_time;
};

// The k most trustful learners; ties by fewer mistakes, then less time, then
// lower id. Returned in rank order.
std::vector<int> elect_trustful(std::span<const LearnerStanding> standings,
                                std::size_t k);

// Steps one learner through the calibration prefix, updating its direct
// trust once per `window` instances (and once for a shorter tail).
LearnerStanding calibrate_participant(Participant& p, const Dataset& dataset,
                                      std::span<const std::size_t> prefix,
                                      std::size_t window, const TrustParams& params);

// Level 1 elects k learners from the roster on the calibration prefix of
// `order`; Level 2 negotiates among them on the rest. With k equal to the
// roster size Level 1 is skipped.
RunReport run_moanofs(const Dataset& dataset, std::span<const std::size_t> order,
                      const SystemConfig& cfg);
// Permutes the dataset with cfg.seed first.
RunReport run_moanofs(const Dataset& dataset, const SystemConfig& cfg);

// Multilateral negotiation among the full roster over the whole stream.
RunReport run_manofs(const Dataset& dataset, std::span<const std::size_t> order,
                     const SystemConfig& cfg);

// Fraction of instances misclassified by sgn(w . x).
double evaluate_holdout(const SparseVector& w, const Dataset& dataset,
                        std::span<const std::size_t> holdout);
double evaluate_holdout(const SparseVector& w, const Dataset& dataset);

}  // namespace negofs
