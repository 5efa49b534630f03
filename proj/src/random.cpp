// Copyright 2026 The negofs Authors
// Licensed under the Apache License, Version 2.0

#include "negofs/random.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <unordered_map>

namespace negofs {

std::uint64_t Rng::uniform_below(std::uint64_t n) {
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = kMax - kMax % n;
  std::uint64_t r;
  do {
    r = engine_();
  } while (r >= limit);
  return r % n;
}

double Rng::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::standard_normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1;
  do {
    u1 = uniform01();
  } while (u1 == 0.0);
  const double u2 = uniform01();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const std::size_t j = i + rng.uniform_below(n - i);
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

std::vector<std::size_t> permutation_prefix(std::size_t n, std::size_t k,
                                            Rng& rng) {
  if (k > n) k = n;
  // Displaced slots of the virtual identity array.
  std::unordered_map<std::size_t, std::size_t> moved;
  moved.reserve(2 * k);
  auto slot = [&moved](std::size_t i) {
    auto it = moved.find(i);
    return it == moved.end() ? i : it->second;
  };
  std::vector<std::size_t> prefix;
  prefix.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.uniform_below(n - i);
    const std::size_t vi = slot(i);
    const std::size_t vj = slot(j);
    prefix.push_back(vj);
    moved[j] = vi;
  }
  return prefix;
}

}  // namespace negofs
