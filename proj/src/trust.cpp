// Copyright 2026 The negofs Authors
// Licensed under the Apache License, Version 2.0

#include "negofs/trust.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace negofs {

void TrustParams::validate() const {
  if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("trust c must lie in (0, 1)");
  if (!(threshold > 0.0 && threshold <= 1.0 - c))
    throw std::invalid_argument("trust threshold must lie in (0, 1 - c]");
  if (!(sat_initial >= 0.0 && sat_initial <= 1.0))
    throw std::invalid_argument("initial satisfaction must lie in [0, 1]");
}

double satisfaction_of_window(std::size_t correct, std::size_t total) {
  if (total == 0) throw std::invalid_argument("empty satisfaction window");
  if (correct > total) throw std::invalid_argument("correct exceeds window size");
  return static_cast<double>(correct) / static_cast<double>(total);
}

TrustState update_trust(const TrustState& state, double sat_cur,
                        const TrustParams& params) {
  if (!(sat_cur >= 0.0 && sat_cur <= 1.0))
    throw std::invalid_argument("current satisfaction must lie in [0, 1]");
  TrustState next = state;
  const double delta = std::abs(state.sat - sat_cur);
  next.xi = params.c * delta + (1.0 - params.c) * state.xi;
  const double xi_for_alpha =
      params.deviation == DeviationSource::kCurrent ? next.xi : state.xi;
  const double alpha =
      state.first_done ? params.threshold + params.c * delta / (1.0 + xi_for_alpha)
                       : 1.0;
  next.sat = std::clamp(alpha * sat_cur + (1.0 - alpha) * state.sat, 0.0, 1.0);
  next.last_alpha = alpha;
  next.first_done = true;
  ++next.n;
  return next;
}

}  // namespace negofs
