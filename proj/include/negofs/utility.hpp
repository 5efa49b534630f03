// Copyright 2026 The negofs Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>

namespace negofs {

enum class Direction { kMinimize, kMaximize };

struct IssueDomain {
  double lower;
  double upper;
  Direction direction;
};

// Linear scoring function onto [0, 1]; values outside the domain are clamped.
double linear_score(double value, const IssueDomain& domain);

// Weights of the three negotiated issues: Trust, Error, CostTime.
class IssueWeightProfile {
 public:
  IssueWeightProfile() : IssueWeightProfile(0.2, 0.5, 0.3) {}
  IssueWeightProfile(double trust, double error, double cost_time);

  double trust() const { return weights_[0]; }
  double error() const { return weights_[1]; }
  double cost_time() const { return weights_[2]; }
  std::span<const double> weights() const { return weights_; }

  // "t,e,c"
  static IssueWeightProfile parse(std::string_view text);

 private:
  std::array<double, 3> weights_;
};

// Weighted sum of per-issue utilities.
double aggregate_utility(std::span<const double> weights,
                         std::span<const double> scores);
inline double aggregate_utility(const IssueWeightProfile& profile,
                                std::span<const double> scores) {
  return aggregate_utility(profile.weights(), scores);
}

// Badness in [0, 1] of a minimized quantity relative to [lower, upper]; a
// degenerate range (all offers tie) has badness 0.
double normalized_badness(double value, double lower, double upper);

// Scalarized cost of an offer, lower is better:
//   w_trust * (1 - trust) + w_err * badness(err) + w_time * badness(time)
// rounded to 12 decimals.
struct OfferIssues {
  double trust;
  double error_rate;
  double cost_time;
};
struct IssueRanges {
  double error_min, error_max;
  double time_min, time_max;
};
double offer_cost(const OfferIssues& offer, const IssueRanges& ranges,
                  const IssueWeightProfile& profile);
IssueRanges round_ranges(std::span<const OfferIssues> offers);

struct TimeStrategyParams {
  double f1;
  double f2;
  double t_init;
  double t_max;
  double beta;
};

// f1 + ((t - t_init) / (t_max - t_init))^(1/beta) * (f2 - f1), with t clamped
// to the window.
double time_dependent_value(double t, const TimeStrategyParams& p);

struct DeadlineParams {
  double deadline;
  double beta;
};

// 1 - (min(t, deadline) / deadline)^(1/beta)
double time_pressure(double t, const DeadlineParams& p);

}  // namespace negofs
