// Copyright 2026 The negofs Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "negofs/dataset.hpp"
#include "negofs/learners.hpp"
#include "negofs/sparse_vector.hpp"
#include "negofs/timing.hpp"
#include "negofs/trust.hpp"
#include "negofs/utility.hpp"

namespace negofs {

struct Offer {
  int participant_id = 0;
  SparseVector w;
  std::size_t err_count = 0;
  double cost_time = 0.0;
  double trust = 0.0;
  // Instances behind err_count, for the error-rate issue.
  std::size_t instances_seen = 0;

  double error_rate() const {
    return instances_seen == 0 ? 0.0
                               : static_cast<double>(err_count) /
                                     static_cast<double>(instances_seen);
  }
  OfferIssues issues() const { return {trust, error_rate(), cost_time}; }
};

// Per-feature trust layer of the merged vector. Values start at `initial`,
// only grow, and saturate at 1.
class FeatureTrust {
 public:
  FeatureTrust() = default;
  FeatureTrust(std::size_t dimension, double initial = 0.05);

  std::size_t dimension() const { return tf_.size(); }
  double at(Index i) const { return tf_[i]; }
  std::span<const double> values() const { return tf_; }
  void reward(Index i, double amount);

  friend bool operator==(const FeatureTrust&, const FeatureTrust&) = default;

 private:
  std::vector<double> tf_;
};

enum class ConflictRule { kMinError, kMinUtility };
ConflictRule parse_conflict_rule(std::string_view name);
std::string_view conflict_rule_name(ConflictRule rule);

// How the system labels each incoming instance during a trial: with the
// latest merged vector, or with the current model of the participant holding
// the fewest mistakes (ties to the lower id).
enum class SystemPrediction { kMerged, kLeader };
SystemPrediction parse_system_prediction(std::string_view text);
std::string_view system_prediction_name(SystemPrediction p);

struct NegotiationConfig {
  std::size_t t_max = 1;
  // 0 selects the smallest participant budget.
  std::size_t merged_budget = 0;
  // 0 selects 1/n.
  double epsilon = 0.0;
  double tf_initial = 0.05;
  ConflictRule conflict_rule = ConflictRule::kMinError;
  IssueWeightProfile issue_weights;
  // Concession exponent of the initiator's time pressure (MIN_UTILITY only).
  double pressure_beta = 1.0;
  TrustParams trust_params;
  Timing timing = Timing::kThreadCpu;
  SystemPrediction prediction = SystemPrediction::kLeader;
};

enum class MessageKind { kCfp, kPropose, kAccept, kReject, kInform, kAbort };
std::string_view message_kind_name(MessageKind kind);

inline constexpr int kInitiator = -1;
inline constexpr int kEveryone = -2;

struct ProtocolMessage {
  std::size_t round = 0;
  MessageKind kind = MessageKind::kCfp;
  int sender = kInitiator;
  int receiver = kEveryone;
  // Payload digest for PROPOSE and INFORM.
  std::size_t support = 0;
  double l2 = 0.0;
  bool has_payload = false;
  // CFP of a round with no fresh data.
  bool stale = false;
  // Logical timestamp (append order).
  std::size_t timestamp = 0;
};

class NegotiationTranscript {
 public:
  void append(ProtocolMessage msg);
  std::span<const ProtocolMessage> messages() const { return messages_; }
  std::size_t size() const { return messages_.size(); }
  std::size_t rounds() const;

  // Rounds non-decreasing, each opened by CFP and closed by INFORM or ABORT.
  bool well_formed() const;

  // One line per message: round, kind, sender, receiver, payload digest,
  // tab separated. The digest is "nnz=<support>;l2=<norm to 6 decimals>".
  void write_log(std::ostream& out) const;
  std::string to_log() const;

 private:
  std::vector<ProtocolMessage> messages_;
};

// A learner acting as negotiator.
struct Participant {
  int id = 0;
  Learner learner;
  TrustState trust;
  bool responsive = true;
  std::size_t instances_seen = 0;

  Offer make_offer() const;
};

class InsufficientOffers : public std::runtime_error {
 public:
  explicit InsufficientOffers(std::size_t got);
};

// Issues a CFP (flagged stale when the round has no fresh data) and collects one PROPOSE per responsive participant (REJECT
// for the others). Throws InsufficientOffers with fewer than two offers; the
// CFP and replies stay in the transcript.
std::vector<Offer> call_for_proposals(std::size_t round,
                                      std::span<const Participant> participants,
                                      NegotiationTranscript& transcript,
                                      bool stale = false);

// Union of both selections; a feature selected by both takes the weight of
// the offer with the smaller err_count, ties to the lower participant id.
SparseVector merge_bilateral(const Offer& o1, const Offer& o2);

struct MergeResult {
  SparseVector merged;
  FeatureTrust trust;
};

// Multilateral merge over >= 2 offers. Per feature: unselected -> 0; selected
// by one -> that weight; selected by several -> the weight of the offer that
// wins the conflict rule. Each selected feature then gains epsilon per
// selecting offer in feature trust, and the result is cut to the merged
// budget ranked by (trust desc, |w| desc, index asc).
MergeResult merge_multilateral(std::span<const Offer> offers,
                               const FeatureTrust& trust,
                               const NegotiationConfig& cfg,
                               std::size_t budget);
// In-place variant used by the trial loop.
SparseVector merge_multilateral_into(std::span<const Offer> offers,
                                     FeatureTrust& trust,
                                     const NegotiationConfig& cfg,
                                     std::size_t budget);

// Replaces every participant's weights with the merged vector and records an
// INFORM. Covariances are untouched and budgets are re-established by each
// learner's next update.
void broadcast(const SparseVector& merged, std::span<Participant> participants,
               std::size_t round, NegotiationTranscript& transcript);

struct TrialMetrics {
  std::size_t round = 0;
  std::size_t chunk_begin = 0;
  std::size_t chunk_size = 0;
  std::size_t system_mistakes = 0;
  std::size_t offers = 0;
  std::size_t accepted = 0;
  std::size_t merged_support = 0;
  double merge_time = 0.0;
  bool stale = false;
  bool aborted = false;
};

struct NegotiationResult {
  SparseVector merged;
  NegotiationTranscript transcript;
  std::vector<TrialMetrics> trials;
  FeatureTrust feature_trust;
  // Online mistakes of the system model over the stream.
  std::size_t system_mistakes = 0;
  std::size_t instances = 0;
  double update_time = 0.0;
  double merge_time = 0.0;

  double error_rate() const {
    return instances == 0 ? 0.0
                          : static_cast<double>(system_mistakes) /
                                static_cast<double>(instances);
  }
  double total_time() const { return update_time + merge_time; }
};

// Instances per trial: ceil(n / t_max).
std::size_t chunk_size(std::size_t n, std::size_t t_max);

// Trial loop over the stream `order` (indices into dataset). Each trial every
// participant steps through its chunk, trust is updated with the chunk
// accuracy, then CFP -> merge -> broadcast. The system label of each
// instance comes from the model chosen by cfg.prediction.
NegotiationResult run_negotiation(std::span<Participant> participants,
                                  const Dataset& dataset,
                                  std::span<const std::size_t> order,
                                  const NegotiationConfig& cfg);

}  // namespace negofs
