// Copyright 2026 The negofs Authors
// Licensed under the Apache License, Version 2.0

#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "negofs/moanofs.hpp"

using namespace negofs;

namespace {

SystemConfig base_config(std::vector<LearnerConfig> roster, std::size_t k) {
  SystemConfig c;
  c.roster = std::move(roster);
  c.k = k;
  c.timing = Timing::kWorkUnits;
  c.budget_fraction = 0.2;
  return c;
}

std::vector<LearnerConfig> roster_of(std::initializer_list<Variant> vs) {
  std::vector<LearnerConfig> r;
  std::uint64_t seed = 1;
  for (Variant v : vs) {
    LearnerConfig c;
    c.variant = v;
    c.seed = seed++;
    r.push_back(c);
  }
  return r;
}

std::vector<std::size_t> identity(std::size_t n) {
  std::vector<std::size_t> o(n);
  std::iota(o.begin(), o.end(), std::size_t{0});
  return o;
}

const SyntheticData& synthetic() {
  static const SyntheticData s = generate_synthetic({40, 1500, 5, 0.3, 0.05, 13});
  return s;
}

}  // namespace

TEST(Election, TopTrust) {
  const std::vector<LearnerStanding> s{{0, 0.9, 4, 1.0}, {1, 0.3, 1, 1.0}, {2, 0.7, 7, 1.0}};
  EXPECT_EQ(elect_trustful(s, 2), (std::vector<int>{0, 2}));
  EXPECT_EQ(elect_trustful(s, 3), (std::vector<int>{0, 2, 1}));
  EXPECT_THROW(elect_trustful(s, 4), std::invalid_argument);
}

TEST(Election, TieBreakChain) {
  const std::vector<LearnerStanding> s{{0, 0.5, 5, 1.0}, {1, 0.5, 2, 1.0}, {2, 0.5, 9, 1.0}};
  EXPECT_EQ(elect_trustful(s, 2), (std::vector<int>{1, 0}));
  const std::vector<LearnerStanding> t{{0, 0.5, 2, 3.0}, {1, 0.5, 2, 1.0}, {2, 0.5, 2, 1.0}};
  EXPECT_EQ(elect_trustful(t, 3), (std::vector<int>{1, 2, 0}));
}

TEST(Moanofs, DefaultRoster) {
  const auto r = default_roster(4);
  const Variant expected[] = {Variant::kPetrun, Variant::kRomma, Variant::kAlma, Variant::kOgd, Variant::kPa,
                              Variant::kSop,    Variant::kCw,    Variant::kArow, Variant::kScw};
  ASSERT_EQ(r.size(), 9u);
  for (std::size_t i = 0; i < 9; ++i) {
    EXPECT_EQ(r[i].variant, expected[i]);
    EXPECT_EQ(r[i].seed, 4u * 1000003u + i);
  }
}

TEST(Moanofs, ConfigValidation) {
  SystemConfig c = base_config(roster_of({Variant::kPa, Variant::kOgd, Variant::kArow}), 4);
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.k = 1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.k = 2;
  c.calibration_fraction = 1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.calibration_fraction = 0.2;
  c.budget_fraction = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.budget_fraction = 0.1;
  EXPECT_NO_THROW(c.validate());
}

TEST(Moanofs, LevelSplitAndReport) {
  const auto& s = synthetic();
  SystemConfig c = base_config(roster_of({Variant::kPa, Variant::kOgd, Variant::kArow, Variant::kPetrun}), 2);
  const auto order = permute(s.dataset.size(), 5);
  const RunReport r = run_moanofs(s.dataset, order, c);
  EXPECT_EQ(r.calibration_instances.size(), 300u);
  EXPECT_EQ(r.negotiation_instances.size(), 1200u);
  EXPECT_EQ(r.system_instances, 1200u);
  EXPECT_EQ(r.budget.value(), 8u);
  EXPECT_EQ(r.elected.size(), 2u);
  EXPECT_EQ(r.calibration_window, 120u);
  EXPECT_FALSE(r.calibration_window_shrunk);
  EXPECT_EQ(r.trials.size(), 10u);
  EXPECT_TRUE(r.transcript.well_formed());
  EXPECT_LE(r.merged.l0_norm(), 8u);
  for (const auto& lr : r.learners) {
    EXPECT_EQ(lr.instances, lr.elected ? 1500u : 300u);
    EXPECT_GE(lr.direct_trust, 0.0);
    EXPECT_LE(lr.direct_trust, 1.0);
  }
  EXPECT_LT(r.error_rate(), 0.5);
}

TEST(Moanofs, ElectedAreMostTrusted) {
  const auto& s = synthetic();
  SystemConfig c = base_config(default_roster(2, Timing::kWorkUnits), 3);
  const RunReport r = run_moanofs(s.dataset, c);
  double min_elected = 1.0;
  double max_other = 0.0;
  for (const auto& lr : r.learners) {
    if (lr.elected) {
      min_elected = std::min(min_elected, lr.direct_trust);
    } else {
      max_other = std::max(max_other, lr.direct_trust);
    }
  }
  EXPECT_EQ(r.elected.size(), 3u);
  EXPECT_GE(min_elected, max_other);
}

TEST(Moanofs, CalibrationWindowShrinksOnShortPrefix) {
  const auto& s = synthetic();
  SystemConfig c = base_config(roster_of({Variant::kPa, Variant::kOgd, Variant::kArow}), 2);
  c.t_max = 1;
  const auto order = identity(40);
  const RunReport r = run_moanofs(s.dataset, order, c);
  EXPECT_TRUE(r.calibration_window_shrunk);
  EXPECT_EQ(r.calibration_window, 8u);
  EXPECT_THROW(run_moanofs(s.dataset, identity(9), c), std::invalid_argument);
}

TEST(Moanofs, FullRosterSkipsLevelOne) {
  const auto& s = synthetic();
  const auto roster = roster_of({Variant::kPa, Variant::kOgd, Variant::kArow});
  const auto order = permute(s.dataset.size(), 3);
  const RunReport a = run_moanofs(s.dataset, order, base_config(roster, 3));
  const RunReport b = run_manofs(s.dataset, order, base_config(roster, 2));
  EXPECT_TRUE(a.calibration_instances.empty());
  EXPECT_EQ(a.system_instances, s.dataset.size());
  EXPECT_EQ(a.merged, b.merged);
  EXPECT_EQ(a.system_mistakes, b.system_mistakes);
  EXPECT_EQ(a.transcript.to_log(), b.transcript.to_log());
}

TEST(Moanofs, FlippedCalibrationLearnerIsNotElected) {
  const auto& s = synthetic();
  Dataset flipped = s.dataset;
  for (auto& inst : flipped.instances) inst.y = -inst.y;
  const auto roster = roster_of({Variant::kPa, Variant::kPa, Variant::kPa});
  const auto order = identity(400);
  std::vector<LearnerStanding> standings;
  for (int id = 0; id < 3; ++id) {
    LearnerConfig lc = roster[static_cast<std::size_t>(id)];
    lc.budget = Budget(8);
    Participant p{id, Learner(lc, s.dataset.dimension), TrustState::fresh({}), true, 0};
    standings.push_back(calibrate_participant(p, id == 1 ? flipped : s.dataset, order, 50, {}));
    EXPECT_EQ(p.trust.n, 8u);
  }
  EXPECT_LT(standings[1].trust, standings[0].trust);
  EXPECT_LT(standings[1].trust, standings[2].trust);
  const auto elected = elect_trustful(standings, 2);
  EXPECT_EQ(std::count(elected.begin(), elected.end(), 1), 0);
}

TEST(Moanofs, CalibrationTailWindowCounts) {
  const auto& s = synthetic();
  LearnerConfig lc;
  lc.variant = Variant::kOgd;
  lc.budget = Budget(4);
  Participant p{0, Learner(lc, s.dataset.dimension), TrustState::fresh({}), true, 0};
  calibrate_participant(p, s.dataset, identity(23), 10, {});
  EXPECT_EQ(p.trust.n, 3u);
  EXPECT_EQ(p.instances_seen, 23u);
}

TEST(Moanofs, IdenticalLearnersReduceToOne) {
  const auto& s = synthetic();
  LearnerConfig lc;
  lc.variant = Variant::kPetrun;
  lc.seed = 9;
  SystemConfig c = base_config({lc, lc, lc}, 3);
  const auto order = permute(s.dataset.size(), 21);
  const RunReport r = run_moanofs(s.dataset, order, c);

  lc.budget = r.budget;
  lc.timing = Timing::kWorkUnits;
  Learner solo(lc, s.dataset.dimension);
  for (std::size_t i : order) solo.step(s.dataset.instances[i].x, s.dataset.instances[i].y);
  EXPECT_EQ(r.merged, solo.state().w);
  EXPECT_EQ(r.system_mistakes, solo.state().mistakes);

  // Every round carries three identical proposals.
  const auto msgs = r.transcript.messages();
  for (std::size_t i = 0; i + 2 < msgs.size(); ++i) {
    if (msgs[i].kind != MessageKind::kPropose || msgs[i].sender != 0) continue;
    EXPECT_EQ(msgs[i + 1].support, msgs[i].support);
    EXPECT_EQ(msgs[i + 2].support, msgs[i].support);
    EXPECT_EQ(msgs[i + 1].l2, msgs[i].l2);
    EXPECT_EQ(msgs[i + 2].l2, msgs[i].l2);
  }
}

TEST(Moanofs, DeterministicElection) {
  const auto& s = synthetic();
  SystemConfig c = base_config(default_roster(6, Timing::kWorkUnits), 3);
  c.seed = 6;
  const RunReport a = run_moanofs(s.dataset, c);
  const RunReport b = run_moanofs(s.dataset, c);
  EXPECT_EQ(a.elected, b.elected);
  EXPECT_EQ(a.merged, b.merged);
  EXPECT_EQ(a.cost_time, b.cost_time);
}

TEST(Holdout, PlantedModelIsPerfectWithoutNoise) {
  const SyntheticData s = generate_synthetic({30, 500, 4, 0.3, 0.0, 2});
  EXPECT_EQ(evaluate_holdout(s.planted, s.dataset), 0.0);
}

TEST(Holdout, ZeroModelScoresPositiveFraction) {
  const auto& s = synthetic();
  std::size_t pos = 0;
  for (const auto& inst : s.dataset.instances) pos += inst.y == 1;
  EXPECT_DOUBLE_EQ(evaluate_holdout(SparseVector(s.dataset.dimension), s.dataset),
                   static_cast<double>(pos) / static_cast<double>(s.dataset.size()));
  EXPECT_THROW(evaluate_holdout(SparseVector(s.dataset.dimension), s.dataset, {}), std::invalid_argument);
}

TEST(Holdout, RandomModelOnRandomLabels) {
  Rng rng(31);
  Dataset ds;
  ds.dimension = 20;
  for (int i = 0; i < 10000; ++i) {
    std::vector<Entry> e;
    for (Index j = 0; j < 20; ++j) e.push_back({j, rng.standard_normal()});
    ds.instances.push_back({SparseVector::from_entries(20, std::move(e)), rng.bernoulli(0.5) ? 1 : -1});
  }
  std::vector<Entry> w;
  for (Index j = 0; j < 20; ++j) w.push_back({j, rng.standard_normal()});
  EXPECT_NEAR(evaluate_holdout(SparseVector::from_entries(20, std::move(w)), ds), 0.5, 0.05);
}
