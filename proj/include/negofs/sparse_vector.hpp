// Copyright 2026 The negofs Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace negofs {

using Index = std::uint32_t;

// Entries with magnitude below this after arithmetic are treated as zero.
inline constexpr double kZeroTolerance = 1e-15;

struct Entry {
  Index index;
  double value;

  friend bool operator==(const Entry&, const Entry&) = default;
};

// Sparse real vector of fixed dimension. Entries are kept sorted by index and
// never hold an exact zero.
class SparseVector {
 public:
  SparseVector() = default;
  explicit SparseVector(std::size_t dimension) : dimension_(dimension) {}

  // Builds from (index, value) pairs in any order. Throws std::invalid_argument
  // on out-of-range or duplicate indices; zero values are dropped.
  SparseVector(std::size_t dimension, std::initializer_list<Entry> entries);
  static SparseVector from_entries(std::size_t dimension,
                                   std::vector<Entry> entries);

  // Entries must already be sorted, unique, in range and nonzero.
  static SparseVector from_sorted_unchecked(std::size_t dimension,
                                            std::vector<Entry> entries);

  std::size_t dimension() const { return dimension_; }
  std::size_t l0_norm() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::span<const Entry> entries() const { return entries_; }

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  // Value at index, 0 when not stored.
  double at(Index index) const;
  bool contains(Index index) const;

  bool valid() const;

  friend bool operator==(const SparseVector&, const SparseVector&) = default;

 private:
  std::size_t dimension_ = 0;
  std::vector<Entry> entries_;
};

// Feature budget: the maximum number of nonzero weights.
class Budget {
 public:
  explicit Budget(std::size_t value);
  std::size_t value() const { return value_; }
  friend bool operator==(const Budget&, const Budget&) = default;

 private:
  std::size_t value_;
};

double dot(const SparseVector& a, const SparseVector& b);
double squared_norm(const SparseVector& w);
double l2_norm(const SparseVector& w);

// w + s * x.
SparseVector add_scaled(const SparseVector& w, double s, const SparseVector& x);
// s * w.
SparseVector scaled(const SparseVector& w, double s);

// Keeps the B entries of largest magnitude; equal magnitudes prefer the lower
// index.
SparseVector truncate(const SparseVector& w, Budget budget);

// Keeps only the listed indices (any order, duplicates ignored).
SparseVector restrict_to(const SparseVector& w, std::span<const Index> keep);

// min{1, 1/(sqrt(lambda) * ||w||)} * w.
SparseVector project_l2_ball(const SparseVector& w, double lambda);

std::vector<Index> support(const SparseVector& w);

}  // namespace negofs
