// Copyright 2026 The negofs Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace negofs {

// Seeded generator with platform-independent derived draws. The standard
// distributions are implementation-defined, so uniform integers, uniform
// reals and normals are derived here directly from the 64-bit engine output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, n); n must be positive.
  std::uint64_t uniform_below(std::uint64_t n);

  // Uniform real in [0, 1).
  double uniform01();

  double standard_normal();

  bool bernoulli(double p) { return uniform01() < p; }

  friend bool operator==(const Rng&, const Rng&) = default;

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Uniform random permutation of [0, n) by Fisher-Yates.
std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng);

// First k entries of a Fisher-Yates permutation of [0, n), using O(k) memory.
// Consumes exactly k draws.
std::vector<std::size_t> permutation_prefix(std::size_t n, std::size_t k,
                                            Rng& rng);

}  // namespace negofs
