// Copyright 2026 The negofs Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstddef>

namespace negofs {

// Which accumulated deviation feeds the adaptive weight alpha: the one just
// updated with the current deviation, or the one from the previous
// transaction.
enum class DeviationSource { kCurrent, kPrevious };

struct TrustParams {
  double c = 0.5;
  double threshold = 0.25;
  double sat_initial = 0.0;
  DeviationSource deviation = DeviationSource::kCurrent;

  void validate() const;
};

// Direct-trust state of one evaluator towards one target.
struct TrustState {
  double sat = 0.0;
  double xi = 0.0;
  std::size_t n = 0;
  bool first_done = false;
  // alpha used by the most recent transaction.
  double last_alpha = 1.0;

  static TrustState fresh(const TrustParams& params) {
    TrustState s;
    s.sat = params.sat_initial;
    return s;
  }

  friend bool operator==(const TrustState&, const TrustState&) = default;
};

// correct / total; total must be positive.
double satisfaction_of_window(std::size_t correct, std::size_t total);

// One transaction of the satisfaction recurrence:
//   delta = |sat - sat_cur|
//   xi    = c * delta + (1 - c) * xi
//   alpha = 1 on the first transaction, else threshold + c * delta / (1 + xi)
//   sat   = alpha * sat_cur + (1 - alpha) * sat
TrustState update_trust(const TrustState& state, double sat_cur,
                        const TrustParams& params);

inline double direct_trust(const TrustState& state) { return state.sat; }

}  // namespace negofs
