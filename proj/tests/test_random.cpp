// Copyright 2026 The negofs Authors
// Licensed under the Apache License, Version 2.0

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <gtest/gtest.h>

#include "negofs/dataset.hpp"
#include "negofs/random.hpp"

using namespace negofs;

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
  EXPECT_NE(Rng(42).next(), Rng(43).next());
}

TEST(Rng, UniformBelowStaysInRange) {
  Rng rng(1);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto v = rng.uniform_below(7);
    ASSERT_LT(v, 7u);
    ++counts[v];
  }
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
}

TEST(Rng, UniformAndNormalMoments) {
  Rng rng(2);
  double su = 0.0, sn = 0.0, sn2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    su += u;
    const double z = rng.standard_normal();
    sn += z;
    sn2 += z * z;
  }
  EXPECT_NEAR(su / n, 0.5, 0.005);
  EXPECT_NEAR(sn / n, 0.0, 0.01);
  EXPECT_NEAR(sn2 / n, 1.0, 0.02);
}

TEST(Permutation, PrefixMatchesFullShuffle) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    for (std::size_t k : {0u, 1u, 3u, 9u, 10u}) {
      Rng a(seed), b(seed);
      const auto full = random_permutation(10, a);
      const auto prefix = permutation_prefix(10, k, b);
      ASSERT_EQ(prefix.size(), k);
      for (std::size_t i = 0; i < k; ++i) ASSERT_EQ(prefix[i], full[i]);
    }
  }
}

TEST(Permutation, PrefixConsumesExactlyKDraws) {
  Rng a(5), b(5);
  permutation_prefix(1000000, 4, a);
  for (int i = 0; i < 4; ++i) b.uniform_below(1000000 - static_cast<std::uint64_t>(i));
  EXPECT_EQ(a, b);
}

TEST(Permute, SmallCases) {
  EXPECT_EQ(permute(1, 123), std::vector<std::size_t>{0});
  EXPECT_EQ(permute(20, 9), permute(20, 9));
  EXPECT_NE(permute(20, 9), permute(20, 10));
  auto p = permute(100, 4);
  std::vector<std::size_t> sorted = p;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> id(100);
  std::iota(id.begin(), id.end(), std::size_t{0});
  EXPECT_EQ(sorted, id);
}

TEST(Permute, InverseComposesToIdentity) {
  const auto p = permute(257, 77);
  const auto inv = inverse_permutation(p);
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_EQ(inv[p[i]], i);
    EXPECT_EQ(p[inv[i]], i);
  }
}

TEST(Permute, UniformOverAllPermutationsOfFive) {
  std::map<std::vector<std::size_t>, int> counts;
  const int seeds = 1000;
  for (int s = 0; s < seeds; ++s) ++counts[permute(5, static_cast<std::uint64_t>(s))];
  const double expected = seeds / 120.0;
  const double sigma = std::sqrt(seeds * (1.0 / 120.0) * (119.0 / 120.0));
  double chi2 = 0.0;
  std::vector<std::size_t> perm{0, 1, 2, 3, 4};
  int distinct = 0;
  do {
    const int c = counts.count(perm) ? counts[perm] : 0;
    distinct += c > 0;
    EXPECT_LE(std::abs(c - expected), 3.0 * sigma);
    chi2 += (c - expected) * (c - expected) / expected;
  } while (std::next_permutation(perm.begin(), perm.end()));
  EXPECT_EQ(counts.size(), static_cast<std::size_t>(distinct));
  // Upper 0.1% point of chi-square with 119 degrees of freedom is about 173.
  EXPECT_LT(chi2, 173.0);
}
