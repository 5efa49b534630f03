// Copyright 2026 The negofs Authors
// Licensed under the Apache License, Version 2.0

#include "negofs/negotiation.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <sstream>

namespace negofs {
namespace {

// Offer positions ordered best-first under the conflict rule.
std::vector<std::size_t> rank_offers(std::span<const Offer> offers,
                                     const NegotiationConfig& cfg) {
  std::vector<std::size_t> order(offers.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (cfg.conflict_rule == ConflictRule::kMinError) {
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (offers[a].err_count != offers[b].err_count)
        return offers[a].err_count < offers[b].err_count;
      return offers[a].participant_id < offers[b].participant_id;
    });
    return order;
  }
  std::vector<OfferIssues> issues;
  issues.reserve(offers.size());
  for (const auto& o : offers) issues.push_back(o.issues());
  const IssueRanges ranges = round_ranges(issues);
  std::vector<double> cost(offers.size());
  for (std::size_t i = 0; i < offers.size(); ++i)
    cost[i] = offer_cost(issues[i], ranges, cfg.issue_weights);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (cost[a] != cost[b]) return cost[a] < cost[b];
    return offers[a].participant_id < offers[b].participant_id;
  });
  return order;
}

struct Selection {
  Index index;
  std::size_t rank;
  double value;
};

double resolve_epsilon(const NegotiationConfig& cfg, std::size_t n) {
  return cfg.epsilon > 0.0 ? cfg.epsilon : 1.0 / static_cast<double>(n);
}

// Cuts to `budget` entries by (trust desc, |w| desc, index asc).
SparseVector cut_to_budget(std::vector<Entry> entries, const FeatureTrust& trust,
                           std::size_t budget, std::size_t dimension) {
  if (entries.size() > budget) {
    std::sort(entries.begin(), entries.end(), [&](const Entry& a, const Entry& b) {
      const double ta = trust.at(a.index);
      const double tb = trust.at(b.index);
      if (ta != tb) return ta > tb;
      const double wa = std::abs(a.value);
      const double wb = std::abs(b.value);
      if (wa != wb) return wa > wb;
      return a.index < b.index;
    });
    entries.resize(budget);
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.index < b.index; });
  }
  return SparseVector::from_sorted_unchecked(dimension, std::move(entries));
}

void require_offers_compatible(std::span<const Offer> offers,
                               const FeatureTrust& trust) {
  if (offers.size() < 2) throw InsufficientOffers(offers.size());
  for (const auto& o : offers) {
    if (o.w.dimension() != offers[0].w.dimension())
      throw std::invalid_argument("offer dimension mismatch");
  }
  if (trust.dimension() != offers[0].w.dimension())
    throw std::invalid_argument("feature trust dimension mismatch");
}

std::string digest(const ProtocolMessage& m) {
  if (m.has_payload) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "nnz=%zu;l2=%.6f", m.support, m.l2);
    return buf;
  }
  return m.stale ? "stale" : "-";
}

std::string party(int id) {
  if (id == kInitiator) return "I";
  if (id == kEveryone) return "*";
  return std::to_string(id);
}

ProtocolMessage payload_message(std::size_t round, MessageKind kind, int sender,
                                int receiver, const SparseVector& w) {
  ProtocolMessage m;
  m.round = round;
  m.kind = kind;
  m.sender = sender;
  m.receiver = receiver;
  m.support = w.l0_norm();
  m.l2 = l2_norm(w);
  m.has_payload = true;
  return m;
}

}  // namespace

FeatureTrust::FeatureTrust(std::size_t dimension, double initial)
    : tf_(dimension, initial) {
  if (!(initial >= 0.0 && initial <= 1.0))
    throw std::invalid_argument("feature trust must start in [0, 1]");
}

void FeatureTrust::reward(Index i, double amount) {
  tf_[i] = std::min(1.0, tf_[i] + amount);
}

ConflictRule parse_conflict_rule(std::string_view name) {
  if (name == "min-error") return ConflictRule::kMinError;
  if (name == "min-utility") return ConflictRule::kMinUtility;
  throw std::invalid_argument("unknown conflict rule '" + std::string(name) +
                              "' (expected min-error|min-utility)");
}

std::string_view conflict_rule_name(ConflictRule rule) {
  return rule == ConflictRule::kMinError ? "min-error" : "min-utility";
}

SystemPrediction parse_system_prediction(std::string_view text) {
  if (text == "merged") return SystemPrediction::kMerged;
  if (text == "leader") return SystemPrediction::kLeader;
  throw std::invalid_argument("unknown system prediction '" + std::string(text) +
                              "' (expected merged|leader)");
}

std::string_view system_prediction_name(SystemPrediction p) {
  return p == SystemPrediction::kMerged ? "merged" : "leader";
}

std::string_view message_kind_name(MessageKind kind) {
  switch (kind) {
    case MessageKind::kCfp: return "CFP";
    case MessageKind::kPropose: return "PROPOSE";
    case MessageKind::kAccept: return "ACCEPT";
    case MessageKind::kReject: return "REJECT";
    case MessageKind::kInform: return "INFORM";
    case MessageKind::kAbort: return "ABORT";
  }
  return "?";
}

void NegotiationTranscript::append(ProtocolMessage msg) {
  msg.timestamp = messages_.size();
  messages_.push_back(msg);
}

std::size_t NegotiationTranscript::rounds() const {
  std::size_t n = 0;
  for (const auto& m : messages_) n += m.kind == MessageKind::kCfp;
  return n;
}

bool NegotiationTranscript::well_formed() const {
  bool open = false;
  std::size_t round = 0;
  for (std::size_t i = 0; i < messages_.size(); ++i) {
    const auto& m = messages_[i];
    if (i > 0 && m.round < messages_[i - 1].round) return false;
    if (!open) {
      if (m.kind != MessageKind::kCfp) return false;
      open = true;
      round = m.round;
      continue;
    }
    if (m.round != round || m.kind == MessageKind::kCfp) return false;
    if (m.kind == MessageKind::kInform || m.kind == MessageKind::kAbort) open = false;
  }
  return !open;
}

void NegotiationTranscript::write_log(std::ostream& out) const {
  for (const auto& m : messages_) {
    out << m.round << '\t' << message_kind_name(m.kind) << '\t' << party(m.sender)
        << '\t' << party(m.receiver) << '\t' << digest(m) << '\n';
  }
}

std::string NegotiationTranscript::to_log() const {
  std::ostringstream ss;
  write_log(ss);
  return ss.str();
}

Offer Participant::make_offer() const {
  const auto& s = learner.state();
  Offer o;
  o.participant_id = id;
  o.w = s.w;
  o.err_count = s.mistakes;
  o.cost_time = s.cumulative_time;
  o.trust = direct_trust(trust);
  o.instances_seen = instances_seen;
  return o;
}

InsufficientOffers::InsufficientOffers(std::size_t got)
    : std::runtime_error("insufficient offers: " + std::to_string(got) +
                         " received, at least 2 required") {}

std::vector<Offer> call_for_proposals(std::size_t round,
                                      std::span<const Participant> participants,
                                      NegotiationTranscript& transcript,
                                      bool stale) {
  ProtocolMessage cfp;
  cfp.round = round;
  cfp.kind = MessageKind::kCfp;
  cfp.stale = stale;
  transcript.append(cfp);
  std::vector<Offer> offers;
  offers.reserve(participants.size());
  for (const auto& p : participants) {
    if (!p.responsive) {
      ProtocolMessage rej;
      rej.round = round;
      rej.kind = MessageKind::kReject;
      rej.sender = p.id;
      rej.receiver = kInitiator;
      transcript.append(rej);
      continue;
    }
    offers.push_back(p.make_offer());
    transcript.append(payload_message(round, MessageKind::kPropose, p.id,
                                      kInitiator, offers.back().w));
  }
  if (offers.size() < 2) throw InsufficientOffers(offers.size());
  return offers;
}

SparseVector merge_bilateral(const Offer& o1, const Offer& o2) {
  if (o1.w.dimension() != o2.w.dimension())
    throw std::invalid_argument("offer dimension mismatch");
  const bool first_wins =
      o1.err_count < o2.err_count ||
      (o1.err_count == o2.err_count && o1.participant_id <= o2.participant_id);
  const SparseVector& winner = first_wins ? o1.w : o2.w;
  const SparseVector& loser = first_wins ? o2.w : o1.w;
  std::vector<Entry> out;
  out.reserve(winner.l0_norm() + loser.l0_norm());
  auto iw = winner.begin();
  auto il = loser.begin();
  while (iw != winner.end() || il != loser.end()) {
    if (il == loser.end() || (iw != winner.end() && iw->index <= il->index)) {
      if (il != loser.end() && il->index == iw->index) ++il;
      out.push_back(*iw++);
    } else {
      out.push_back(*il++);
    }
  }
  return SparseVector::from_sorted_unchecked(winner.dimension(), std::move(out));
}

SparseVector merge_multilateral_into(std::span<const Offer> offers,
                                     FeatureTrust& trust,
                                     const NegotiationConfig& cfg,
                                     std::size_t budget) {
  require_offers_compatible(offers, trust);
  const auto ranking = rank_offers(offers, cfg);
  std::vector<Selection> selections;
  std::size_t total = 0;
  for (const auto& o : offers) total += o.w.l0_norm();
  selections.reserve(total);
  for (std::size_t rank = 0; rank < ranking.size(); ++rank) {
    for (const auto& e : offers[ranking[rank]].w)
      selections.push_back({e.index, rank, e.value});
  }
  std::sort(selections.begin(), selections.end(),
            [](const Selection& a, const Selection& b) {
              return a.index != b.index ? a.index < b.index : a.rank < b.rank;
            });
  const double epsilon = resolve_epsilon(cfg, offers.size());
  std::vector<Entry> merged;
  for (std::size_t i = 0; i < selections.size();) {
    std::size_t j = i;
    while (j < selections.size() && selections[j].index == selections[i].index) ++j;
    merged.push_back({selections[i].index, selections[i].value});
    trust.reward(selections[i].index, epsilon * static_cast<double>(j - i));
    i = j;
  }
  return cut_to_budget(std::move(merged), trust, budget, offers[0].w.dimension());
}

MergeResult merge_multilateral(std::span<const Offer> offers,
                               const FeatureTrust& trust,
                               const NegotiationConfig& cfg,
                               std::size_t budget) {
  MergeResult result{SparseVector(), trust};
  result.merged = merge_multilateral_into(offers, result.trust, cfg, budget);
  return result;
}

void broadcast(const SparseVector& merged, std::span<Participant> participants,
               std::size_t round, NegotiationTranscript& transcript) {
  for (auto& p : participants) p.learner.set_weights(merged);
  transcript.append(
      payload_message(round, MessageKind::kInform, kInitiator, kEveryone, merged));
}

std::size_t chunk_size(std::size_t n, std::size_t t_max) {
  if (t_max == 0) throw std::invalid_argument("t_max must be positive");
  return std::max<std::size_t>(1, (n + t_max - 1) / t_max);
}

NegotiationResult run_negotiation(std::span<Participant> participants,
                                  const Dataset& dataset,
                                  std::span<const std::size_t> order,
                                  const NegotiationConfig& cfg) {
  if (participants.size() < 2)
    throw std::invalid_argument("negotiation needs at least two participants");
  if (order.empty()) throw std::invalid_argument("negotiation stream is empty");
  const std::size_t d = dataset.dimension;
  NegotiationConfig round_cfg = cfg;
  round_cfg.epsilon = resolve_epsilon(cfg, participants.size());
  std::size_t budget = cfg.merged_budget;
  if (budget == 0) {
    budget = participants[0].learner.config().budget.value();
    for (const auto& p : participants)
      budget = std::min(budget, p.learner.config().budget.value());
  }

  NegotiationResult result;
  result.feature_trust = FeatureTrust(d, cfg.tf_initial);
  std::vector<double> time_before;
  for (const auto& p : participants)
    time_before.push_back(p.learner.state().cumulative_time);

  // Before the first merge the system follows the participant with the
  // fewest mistakes.
  {
    const Participant* lead = &participants[0];
    for (const auto& p : participants) {
      const auto m = p.learner.state().mistakes;
      if (m < lead->learner.state().mistakes) lead = &p;
    }
    result.merged = lead->learner.state().w;
  }

  const std::size_t per_trial = chunk_size(order.size(), cfg.t_max);
  std::vector<std::size_t> correct(participants.size());
  for (std::size_t round = 1; round <= cfg.t_max; ++round) {
    TrialMetrics tm;
    tm.round = round;
    tm.chunk_begin = std::min(order.size(), (round - 1) * per_trial);
    const std::size_t chunk_end = std::min(order.size(), round * per_trial);
    tm.chunk_size = chunk_end - tm.chunk_begin;
    tm.stale = tm.chunk_size == 0;

    std::fill(correct.begin(), correct.end(), 0);
    for (std::size_t k = tm.chunk_begin; k < chunk_end; ++k) {
      const Instance& inst = dataset.instances[order[k]];
      const SparseVector* model = &result.merged;
      if (cfg.prediction == SystemPrediction::kLeader) {
        const Participant* lead = &participants[0];
        for (const auto& p : participants) {
          if (p.learner.state().mistakes < lead->learner.state().mistakes) lead = &p;
        }
        model = &lead->learner.state().w;
      }
      if (sign_of(dot(*model, inst.x)) != inst.y) ++tm.system_mistakes;
      for (std::size_t p = 0; p < participants.size(); ++p) {
        const Prediction pred = participants[p].learner.step(inst.x, inst.y);
        correct[p] += pred.sign == inst.y;
        ++participants[p].instances_seen;
      }
    }
    if (!tm.stale) {
      for (std::size_t p = 0; p < participants.size(); ++p) {
        participants[p].trust =
            update_trust(participants[p].trust,
                         satisfaction_of_window(correct[p], tm.chunk_size),
                         cfg.trust_params);
      }
    }
    result.system_mistakes += tm.system_mistakes;
    result.instances += tm.chunk_size;

    std::vector<Offer> offers;
    try {
      offers = call_for_proposals(round, participants, result.transcript, tm.stale);
    } catch (const InsufficientOffers&) {
      ProtocolMessage abort;
      abort.round = round;
      abort.kind = MessageKind::kAbort;
      result.transcript.append(abort);
      tm.aborted = true;
      result.trials.push_back(tm);
      continue;
    }
    tm.offers = offers.size();

    std::size_t work = 0;
    for (const auto& o : offers) work += o.w.l0_norm();
    CostMeter meter(cfg.timing);

    std::vector<Offer> accepted;
    if (cfg.conflict_rule == ConflictRule::kMinUtility) {
      std::vector<OfferIssues> issues;
      for (const auto& o : offers) issues.push_back(o.issues());
      const IssueRanges ranges = round_ranges(issues);
      const double limit =
          1.0 - time_pressure(static_cast<double>(round),
                              {static_cast<double>(cfg.t_max), cfg.pressure_beta});
      std::size_t best = 0;
      std::vector<double> cost(offers.size());
      for (std::size_t i = 0; i < offers.size(); ++i) {
        cost[i] = offer_cost(issues[i], ranges, cfg.issue_weights);
        if (cost[i] < cost[best]) best = i;
      }
      for (std::size_t i = 0; i < offers.size(); ++i) {
        if (cost[i] <= limit) accepted.push_back(offers[i]);
      }
      // An agreement is always reached: the cheapest offer is kept when the
      // initiator's current limit admits none.
      if (accepted.empty()) accepted.push_back(offers[best]);
    } else {
      accepted = offers;
    }
    for (const auto& o : offers) {
      const bool ok = std::any_of(accepted.begin(), accepted.end(), [&](const Offer& a) {
        return a.participant_id == o.participant_id;
      });
      ProtocolMessage reply;
      reply.round = round;
      reply.kind = ok ? MessageKind::kAccept : MessageKind::kReject;
      reply.sender = kInitiator;
      reply.receiver = o.participant_id;
      result.transcript.append(reply);
    }
    tm.accepted = accepted.size();

    SparseVector merged;
    if (accepted.size() == 1) {
      std::vector<Entry> entries(accepted[0].w.begin(), accepted[0].w.end());
      for (const auto& e : entries) result.feature_trust.reward(e.index, round_cfg.epsilon);
      merged = cut_to_budget(std::move(entries), result.feature_trust, budget, d);
    } else if (accepted.size() == 2 && cfg.conflict_rule == ConflictRule::kMinError) {
      SparseVector pair = merge_bilateral(accepted[0], accepted[1]);
      for (const auto& e : pair) {
        const double count = accepted[0].w.contains(e.index) + accepted[1].w.contains(e.index);
        result.feature_trust.reward(e.index, round_cfg.epsilon * count);
      }
      std::vector<Entry> entries(pair.begin(), pair.end());
      merged = cut_to_budget(std::move(entries), result.feature_trust, budget, d);
    } else {
      merged = merge_multilateral_into(accepted, result.feature_trust, round_cfg, budget);
    }
    tm.merge_time = meter.stop(work);
    result.merge_time += tm.merge_time;
    tm.merged_support = merged.l0_norm();
    result.merged = std::move(merged);
    broadcast(result.merged, participants, round, result.transcript);
    result.trials.push_back(tm);
  }
  for (std::size_t p = 0; p < participants.size(); ++p)
    result.update_time += participants[p].learner.state().cumulative_time - time_before[p];
  return result;
}

}  // namespace negofs
