// Copyright 2026 The negofs Authors
// Licensed under the Apache License, Version 2.0

#include "negofs/utility.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace negofs {

double linear_score(double value, const IssueDomain& domain) {
  if (!(domain.lower < domain.upper))
    throw std::invalid_argument("issue domain requires lower < upper");
  const double v = std::clamp(value, domain.lower, domain.upper);
  const double span = domain.upper - domain.lower;
  return domain.direction == Direction::kMaximize ? (v - domain.lower) / span
                                                  : (domain.upper - v) / span;
}

IssueWeightProfile::IssueWeightProfile(double trust, double error,
                                       double cost_time)
    : weights_{trust, error, cost_time} {
  for (double w : weights_) {
    if (!(w >= 0.0)) throw std::invalid_argument("issue weights must be non-negative");
  }
  if (std::abs(trust + error + cost_time - 1.0) > 1e-9)
    throw std::invalid_argument("issue weights must sum to 1");
}

IssueWeightProfile IssueWeightProfile::parse(std::string_view text) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string_view token = text.substr(start, comma - start);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size() || token.empty())
      throw std::invalid_argument("malformed issue weights '" + std::string(text) + "'");
    values.push_back(v);
    start = comma + 1;
  }
  if (values.size() != 3)
    throw std::invalid_argument("issue weights need three values t,e,c");
  return IssueWeightProfile(values[0], values[1], values[2]);
}

double aggregate_utility(std::span<const double> weights,
                         std::span<const double> scores) {
  if (weights.size() != scores.size())
    throw std::invalid_argument("score count does not match weight count");
  double u = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) u += weights[i] * scores[i];
  return u;
}

double normalized_badness(double value, double lower, double upper) {
  if (!(upper > lower)) return 0.0;
  return 1.0 - linear_score(value, {lower, upper, Direction::kMinimize});
}

double offer_cost(const OfferIssues& offer, const IssueRanges& ranges,
                  const IssueWeightProfile& profile) {
  const double badness[] = {
      1.0 - std::clamp(offer.trust, 0.0, 1.0),
      normalized_badness(offer.error_rate, ranges.error_min, ranges.error_max),
      normalized_badness(offer.cost_time, ranges.time_min, ranges.time_max)};
  // Rounded so that offers tied in exact arithmetic compare equal.
  return std::round(aggregate_utility(profile, badness) * 1e12) / 1e12;
}

IssueRanges round_ranges(std::span<const OfferIssues> offers) {
  if (offers.empty()) return {0.0, 0.0, 0.0, 0.0};
  IssueRanges r{offers[0].error_rate, offers[0].error_rate, offers[0].cost_time,
                offers[0].cost_time};
  for (const auto& o : offers) {
    r.error_min = std::min(r.error_min, o.error_rate);
    r.error_max = std::max(r.error_max, o.error_rate);
    r.time_min = std::min(r.time_min, o.cost_time);
    r.time_max = std::max(r.time_max, o.cost_time);
  }
  return r;
}

double time_dependent_value(double t, const TimeStrategyParams& p) {
  if (!(p.t_init < p.t_max)) throw std::invalid_argument("t_init must precede t_max");
  if (!(p.beta > 0.0)) throw std::invalid_argument("beta must be positive");
  const double clamped = std::clamp(t, p.t_init, p.t_max);
  const double frac = (clamped - p.t_init) / (p.t_max - p.t_init);
  // f1 + (f2 - f1) need not round to f2.
  if (frac == 1.0) return p.f2;
  return p.f1 + std::pow(frac, 1.0 / p.beta) * (p.f2 - p.f1);
}

double time_pressure(double t, const DeadlineParams& p) {
  if (!(p.deadline > 0.0)) throw std::invalid_argument("deadline must be positive");
  if (!(p.beta > 0.0)) throw std::invalid_argument("beta must be positive");
  const double frac = std::min(std::max(t, 0.0), p.deadline) / p.deadline;
  return 1.0 - std::pow(frac, 1.0 / p.beta);
}

}  // namespace negofs
