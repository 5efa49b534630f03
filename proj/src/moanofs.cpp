// Copyright 2026 The negofs Authors
// Licensed under the Apache License, Version 2.0

#include "negofs/moanofs.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <stdexcept>

namespace negofs {
namespace {

NegotiationConfig negotiation_config(const SystemConfig& cfg, std::size_t stream) {
  NegotiationConfig n;
  n.t_max = cfg.t_max == 0 ? stream : cfg.t_max;
  n.merged_budget = cfg.merged_budget;
  n.epsilon = cfg.epsilon;
  n.conflict_rule = cfg.conflict_rule;
  n.issue_weights = cfg.issue_weights;
  n.pressure_beta = cfg.pressure_beta;
  n.trust_params = cfg.trust_params;
  n.timing = cfg.timing;
  n.prediction = cfg.prediction;
  return n;
}

std::vector<Participant> make_participants(const Dataset& dataset,
                                           const SystemConfig& cfg, Budget budget) {
  std::vector<Participant> ps;
  ps.reserve(cfg.roster.size());
  for (std::size_t i = 0; i < cfg.roster.size(); ++i) {
    LearnerConfig lc = cfg.roster[i];
    lc.budget = budget;
    lc.timing = cfg.timing;
    ps.push_back({static_cast<int>(i), Learner(lc, dataset.dimension),
                  TrustState::fresh(cfg.trust_params), true, 0});
  }
  return ps;
}

void fill_learner_reports(RunReport& report, std::span<const Participant> ps) {
  for (const auto& p : ps) {
    LearnerReport& lr = report.learners[static_cast<std::size_t>(p.id)];
    const auto& s = p.learner.state();
    lr.id = p.id;
    lr.variant = p.learner.config().variant;
    lr.mistakes = s.mistakes;
    lr.instances = p.instances_seen;
    lr.error_rate = p.instances_seen == 0
                        ? 0.0
                        : static_cast<double>(s.mistakes) /
                              static_cast<double>(p.instances_seen);
    lr.cumulative_time = s.cumulative_time;
    lr.direct_trust = direct_trust(p.trust);
  }
}

void absorb(RunReport& report, NegotiationResult&& nr) {
  report.trials = std::move(nr.trials);
  report.merged = std::move(nr.merged);
  report.transcript = std::move(nr.transcript);
  report.system_mistakes = nr.system_mistakes;
  report.system_instances = nr.instances;
  report.cost_time += nr.total_time();
}

}  // namespace

void SystemConfig::validate() const {
  if (roster.size() < 2) throw std::invalid_argument("roster needs at least two learners");
  if (k < 2 || k > roster.size())
    throw std::invalid_argument("k must lie in [2, roster size]");
  if (!(budget_fraction > 0.0 && budget_fraction <= 1.0))
    throw std::invalid_argument("budget fraction must lie in (0, 1]");
  if (!(calibration_fraction > 0.0 && calibration_fraction < 1.0))
    throw std::invalid_argument("calibration fraction must lie in (0, 1)");
  trust_params.validate();
}

std::vector<LearnerConfig> default_roster(std::uint64_t seed, Timing timing) {
  const Variant variants[] = {Variant::kPetrun, Variant::kRomma, Variant::kAlma,
                              Variant::kOgd,    Variant::kPa,    Variant::kSop,
                              Variant::kCw,     Variant::kArow,  Variant::kScw};
  std::vector<LearnerConfig> roster;
  for (std::size_t i = 0; i < std::size(variants); ++i) {
    LearnerConfig c;
    c.variant = variants[i];
    c.seed = seed * 1000003u + i;
    c.timing = timing;
    roster.push_back(c);
  }
  return roster;
}

std::vector<int> elect_trustful(std::span<const LearnerStanding> standings,
                                std::size_t k) {
  if (k > standings.size())
    throw std::invalid_argument("cannot elect " + std::to_string(k) + " of " +
                                std::to_string(standings.size()) + " learners");
  std::vector<LearnerStanding> ranked(standings.begin(), standings.end());
  std::sort(ranked.begin(), ranked.end(),
            [](const LearnerStanding& a, const LearnerStanding& b) {
              if (a.trust != b.trust) return a.trust > b.trust;
              if (a.mistakes != b.mistakes) return a.mistakes < b.mistakes;
              if (a.cumulative_time != b.cumulative_time)
                return a.cumulative_time < b.cumulative_time;
              return a.id < b.id;
            });
  std::vector<int> elected;
  for (std::size_t i = 0; i < k; ++i) elected.push_back(ranked[i].id);
  return elected;
}

LearnerStanding calibrate_participant(Participant& p, const Dataset& dataset,
                                      std::span<const std::size_t> prefix,
                                      std::size_t window, const TrustParams& params) {
  if (window == 0) throw std::invalid_argument("calibration window must be positive");
  std::size_t correct = 0;
  std::size_t in_window = 0;
  for (std::size_t k = 0; k < prefix.size(); ++k) {
    const Instance& inst = dataset.instances[prefix[k]];
    correct += p.learner.step(inst.x, inst.y).sign == inst.y;
    ++p.instances_seen;
    if (++in_window == window || k + 1 == prefix.size()) {
      p.trust = update_trust(p.trust, satisfaction_of_window(correct, in_window), params);
      correct = 0;
      in_window = 0;
    }
  }
  return {p.id, direct_trust(p.trust), p.learner.state().mistakes,
          p.learner.state().cumulative_time};
}

RunReport run_moanofs(const Dataset& dataset, std::span<const std::size_t> order,
                      const SystemConfig& cfg) {
  cfg.validate();
  if (order.size() < 10) throw std::invalid_argument("MOANOFS needs at least 10 instances");
  const auto wall_start = std::chrono::steady_clock::now();
  RunReport report;
  report.budget = budget_for(dataset.dimension, cfg.budget_fraction);
  report.conflict_rule = cfg.conflict_rule;
  report.learners.resize(cfg.roster.size());
  auto participants = make_participants(dataset, cfg, report.budget);

  std::size_t n_cal = 0;
  if (cfg.k < cfg.roster.size()) {
    n_cal = std::clamp<std::size_t>(
        static_cast<std::size_t>(cfg.calibration_fraction * static_cast<double>(order.size())),
        1, order.size() - 1);
    const std::size_t rest = order.size() - n_cal;
    std::size_t window = chunk_size(rest, cfg.t_max == 0 ? rest : cfg.t_max);
    if (window > n_cal) {
      window = n_cal;
      report.calibration_window_shrunk = true;
    }
    report.calibration_window = window;

    std::vector<LearnerStanding> standings;
    for (auto& p : participants) {
      const double t0 = p.learner.state().cumulative_time;
      standings.push_back(calibrate_participant(p, dataset, order.first(n_cal),
                                                window, cfg.trust_params));
      report.cost_time += p.learner.state().cumulative_time - t0;
    }
    report.elected = elect_trustful(standings, cfg.k);
  } else {
    report.elected.resize(participants.size());
    std::iota(report.elected.begin(), report.elected.end(), 0);
  }
  report.calibration_instances.assign(order.begin(), order.begin() + n_cal);
  report.negotiation_instances.assign(order.begin() + n_cal, order.end());

  // Learners that were not elected stop here.
  fill_learner_reports(report, participants);
  std::vector<int> ids = report.elected;
  std::sort(ids.begin(), ids.end());
  std::vector<Participant> negotiators;
  for (int id : ids) negotiators.push_back(std::move(participants[static_cast<std::size_t>(id)]));
  for (int id : ids) report.learners[static_cast<std::size_t>(id)].elected = true;

  const auto stream = order.subspan(n_cal);
  absorb(report, run_negotiation(negotiators, dataset, stream,
                                 negotiation_config(cfg, stream.size())));
  fill_learner_reports(report, negotiators);
  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  return report;
}

RunReport run_moanofs(const Dataset& dataset, const SystemConfig& cfg) {
  const auto order = permute(dataset.size(), cfg.seed);
  return run_moanofs(dataset, order, cfg);
}

RunReport run_manofs(const Dataset& dataset, std::span<const std::size_t> order,
                     const SystemConfig& cfg) {
  SystemConfig all = cfg;
  all.k = cfg.roster.size();
  return run_moanofs(dataset, order, all);
}

double evaluate_holdout(const SparseVector& w, const Dataset& dataset,
                        std::span<const std::size_t> holdout) {
  if (holdout.empty()) throw std::invalid_argument("empty holdout");
  std::size_t wrong = 0;
  for (std::size_t i : holdout) {
    const Instance& inst = dataset.instances[i];
    wrong += sign_of(dot(w, inst.x)) != inst.y;
  }
  return static_cast<double>(wrong) / static_cast<double>(holdout.size());
}

double evaluate_holdout(const SparseVector& w, const Dataset& dataset) {
  std::vector<std::size_t> all(dataset.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return evaluate_holdout(w, dataset, all);
}

}  // namespace negofs
