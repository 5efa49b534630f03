// Copyright 2026 The negofs Authors
// Licensed under the Apache License, Version 2.0

// Brute-force per-feature merge over dense copies of the offers.

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "negofs/negotiation.hpp"

namespace oracle {

struct MergeOutcome {
  std::vector<double> merged;
  std::vector<double> tf;
};

// Minimum-error conflict rule. `key(o)` gives the conflict score of an offer
// (lower wins, then the lower participant id).
template <typename Key>
MergeOutcome brute_force_merge(const std::vector<negofs::Offer>& offers,
                               std::vector<double> tf, double epsilon,
                               std::size_t budget, Key key) {
  const std::size_t d = offers.front().w.dimension();
  MergeOutcome out{std::vector<double>(d, 0.0), std::move(tf)};
  std::vector<std::size_t> selected;
  for (std::size_t i = 0; i < d; ++i) {
    const negofs::Offer* winner = nullptr;
    std::size_t count = 0;
    for (const auto& o : offers) {
      const double v = o.w.at(static_cast<negofs::Index>(i));
      if (v == 0.0) continue;
      ++count;
      if (winner == nullptr || key(o) < key(*winner) ||
          (key(o) == key(*winner) && o.participant_id < winner->participant_id)) {
        winner = &o;
      }
    }
    if (count == 0) continue;
    out.merged[i] = winner->w.at(static_cast<negofs::Index>(i));
    out.tf[i] = std::min(1.0, out.tf[i] + epsilon * static_cast<double>(count));
    selected.push_back(i);
  }
  if (selected.size() > budget) {
    // Repeatedly drop the weakest remaining feature.
    while (selected.size() > budget) {
      std::size_t worst = 0;
      for (std::size_t k = 1; k < selected.size(); ++k) {
        const std::size_t a = selected[k];
        const std::size_t b = selected[worst];
        const bool weaker =
            out.tf[a] < out.tf[b] ||
            (out.tf[a] == out.tf[b] &&
             (std::abs(out.merged[a]) < std::abs(out.merged[b]) ||
              (std::abs(out.merged[a]) == std::abs(out.merged[b]) && a > b)));
        if (weaker) worst = k;
      }
      out.merged[selected[worst]] = 0.0;
      selected.erase(selected.begin() + static_cast<std::ptrdiff_t>(worst));
    }
  }
  return out;
}

}  // namespace oracle
