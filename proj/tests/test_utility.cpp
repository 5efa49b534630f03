// Copyright 2026 The negofs Authors
// Licensed under the Apache License, Version 2.0

#include <array>
#include <vector>

#include <gtest/gtest.h>

#include "negofs/utility.hpp"

using namespace negofs;

TEST(Utility, LinearScoreEndpoints) {
  const IssueDomain up{2.0, 6.0, Direction::kMaximize};
  const IssueDomain down{2.0, 6.0, Direction::kMinimize};
  EXPECT_EQ(linear_score(2.0, up), 0.0);
  EXPECT_EQ(linear_score(6.0, up), 1.0);
  EXPECT_EQ(linear_score(2.0, down), 1.0);
  EXPECT_EQ(linear_score(6.0, down), 0.0);
  EXPECT_EQ(linear_score(4.0, up), 0.5);
  EXPECT_EQ(linear_score(4.0, down), 0.5);
  EXPECT_EQ(linear_score(100.0, up), 1.0);
  EXPECT_EQ(linear_score(-1.0, down), 1.0);
  EXPECT_THROW(linear_score(1.0, {1.0, 1.0, Direction::kMaximize}), std::invalid_argument);
}

TEST(Utility, AggregateExamples) {
  const IssueWeightProfile prof;
  EXPECT_DOUBLE_EQ(aggregate_utility(prof, std::array{1.0, 0.8, 0.5}), 0.2 + 0.4 + 0.15);
  EXPECT_DOUBLE_EQ(aggregate_utility(prof, std::array{1.0, 0.8, 0.5}), 0.75);
  EXPECT_DOUBLE_EQ(aggregate_utility(prof, std::array{1.0, 1.0, 1.0}), 1.0);
  EXPECT_EQ(aggregate_utility(prof, std::array{0.0, 0.0, 0.0}), 0.0);
  EXPECT_THROW(aggregate_utility(prof, std::array{1.0, 1.0}), std::invalid_argument);
}

TEST(Utility, WeightProfileParsing) {
  const IssueWeightProfile p = IssueWeightProfile::parse("0.1,0.6,0.3");
  EXPECT_EQ(p.trust(), 0.1);
  EXPECT_EQ(p.error(), 0.6);
  EXPECT_EQ(p.cost_time(), 0.3);
  EXPECT_THROW(IssueWeightProfile::parse("0.5,0.5"), std::invalid_argument);
  EXPECT_THROW(IssueWeightProfile::parse("0.5,0.6,0.3"), std::invalid_argument);
  EXPECT_THROW(IssueWeightProfile::parse("a,b,c"), std::invalid_argument);
  EXPECT_THROW(IssueWeightProfile::parse("1.2,-0.2,0"), std::invalid_argument);
  EXPECT_THROW(IssueWeightProfile::parse("0.2,0.5,0.3,"), std::invalid_argument);
}

TEST(Utility, OfferCostExamples) {
  const IssueWeightProfile prof;
  const IssueRanges r{0.1, 0.6, 2.0, 4.0};
  EXPECT_EQ(offer_cost({1.0, 0.1, 2.0}, r, prof), 0.0);
  EXPECT_DOUBLE_EQ(offer_cost({0.0, 0.6, 4.0}, r, prof), 1.0);
  // normalized error (0.3 - 0.1) / 0.5 = 0.4, normalized time 1
  EXPECT_NEAR(offer_cost({0.5, 0.3, 4.0}, r, prof), 0.60, 1e-12);
}

TEST(Utility, DegenerateRoundRanges) {
  const std::vector<OfferIssues> offers{{0.5, 0.2, 1.0}, {0.5, 0.2, 1.0}};
  const IssueRanges r = round_ranges(offers);
  EXPECT_EQ(r.error_min, r.error_max);
  EXPECT_DOUBLE_EQ(offer_cost(offers[0], r, IssueWeightProfile()), 0.2 * 0.5);
  EXPECT_EQ(normalized_badness(3.0, 3.0, 3.0), 0.0);
}

TEST(Utility, RoundRangesSpanOffers) {
  const std::vector<OfferIssues> offers{{0.1, 0.3, 5.0}, {0.9, 0.1, 7.0}, {0.4, 0.5, 6.0}};
  const IssueRanges r = round_ranges(offers);
  EXPECT_EQ(r.error_min, 0.1);
  EXPECT_EQ(r.error_max, 0.5);
  EXPECT_EQ(r.time_min, 5.0);
  EXPECT_EQ(r.time_max, 7.0);
  for (const auto& o : offers) {
    const double c = offer_cost(o, r, IssueWeightProfile());
    EXPECT_GE(c, 0.0);
    EXPECT_LE(c, 1.0);
  }
}

TEST(Utility, TimeDependentEndpoints) {
  const TimeStrategyParams p{0.1, 0.9, 2.0, 12.0, 0.5};
  EXPECT_EQ(time_dependent_value(2.0, p), 0.1);
  EXPECT_EQ(time_dependent_value(12.0, p), 0.9);
  EXPECT_EQ(time_dependent_value(0.0, p), 0.1);
  EXPECT_EQ(time_dependent_value(50.0, p), 0.9);
  const TimeStrategyParams lin{0.1, 0.9, 2.0, 12.0, 1.0};
  EXPECT_DOUBLE_EQ(time_dependent_value(7.0, lin), 0.5);
  EXPECT_THROW(time_dependent_value(1.0, {0, 1, 3, 3, 1}), std::invalid_argument);
}

TEST(Utility, TimePressureEndpoints) {
  const DeadlineParams p{8.0, 3.0};
  EXPECT_EQ(time_pressure(0.0, p), 1.0);
  EXPECT_EQ(time_pressure(8.0, p), 0.0);
  EXPECT_EQ(time_pressure(20.0, p), 0.0);
  EXPECT_EQ(time_pressure(4.0, {8.0, 1.0}), 0.5);
  double prev = 1.0;
  for (double t = 0.0; t <= 8.0; t += 0.25) {
    const double v = time_pressure(t, p);
    EXPECT_LE(v, prev);
    prev = v;
  }
  EXPECT_THROW(time_pressure(1.0, {0.0, 1.0}), std::invalid_argument);
}
