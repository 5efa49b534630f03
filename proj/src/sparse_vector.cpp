// Copyright 2026 The negofs Authors
// Licensed under the Apache License, Version 2.0

#include "negofs/sparse_vector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace negofs {
namespace {

void require_same_dimension(const SparseVector& a, const SparseVector& b) {
  if (a.dimension() != b.dimension()) {
    throw std::invalid_argument("dimension mismatch: " +
                                std::to_string(a.dimension()) + " vs " +
                                std::to_string(b.dimension()));
  }
}

bool is_zero(double v) { return std::abs(v) < kZeroTolerance; }

}  // namespace

SparseVector::SparseVector(std::size_t dimension,
                           std::initializer_list<Entry> entries)
    : SparseVector(from_entries(dimension, std::vector<Entry>(entries))) {}

SparseVector SparseVector::from_entries(std::size_t dimension,
                                        std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.index < b.index; });
  SparseVector out(dimension);
  out.entries_.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].index >= dimension) {
      throw std::invalid_argument("index " + std::to_string(entries[i].index) +
                                  " out of range for dimension " +
                                  std::to_string(dimension));
    }
    if (i > 0 && entries[i].index == entries[i - 1].index) {
      throw std::invalid_argument("duplicate index " +
                                  std::to_string(entries[i].index));
    }
    if (!is_zero(entries[i].value)) out.entries_.push_back(entries[i]);
  }
  return out;
}

SparseVector SparseVector::from_sorted_unchecked(std::size_t dimension,
                                                 std::vector<Entry> entries) {
  SparseVector out(dimension);
  out.entries_ = std::move(entries);
  return out;
}

double SparseVector::at(Index index) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), index,
      [](const Entry& e, Index i) { return e.index < i; });
  return (it != entries_.end() && it->index == index) ? it->value : 0.0;
}

bool SparseVector::contains(Index index) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), index,
      [](const Entry& e, Index i) { return e.index < i; });
  return it != entries_.end() && it->index == index;
}

bool SparseVector::valid() const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].index >= dimension_ || entries_[i].value == 0.0)
      return false;
    if (i > 0 && entries_[i - 1].index >= entries_[i].index) return false;
  }
  return true;
}

Budget::Budget(std::size_t value) : value_(value) {
  if (value == 0) throw std::invalid_argument("budget must be at least 1");
}

double dot(const SparseVector& a, const SparseVector& b) {
  require_same_dimension(a, b);
  auto ia = a.begin();
  auto ib = b.begin();
  double sum = 0.0;
  while (ia != a.end() && ib != b.end()) {
    if (ia->index < ib->index) {
      ++ia;
    } else if (ib->index < ia->index) {
      ++ib;
    } else {
      sum += ia->value * ib->value;
      ++ia;
      ++ib;
    }
  }
  return sum;
}

double squared_norm(const SparseVector& w) {
  double sum = 0.0;
  for (const auto& e : w) sum += e.value * e.value;
  return sum;
}

double l2_norm(const SparseVector& w) { return std::sqrt(squared_norm(w)); }

SparseVector add_scaled(const SparseVector& w, double s,
                        const SparseVector& x) {
  require_same_dimension(w, x);
  std::vector<Entry> out;
  out.reserve(w.l0_norm() + x.l0_norm());
  auto push = [&out](Index i, double v) {
    if (!is_zero(v)) out.push_back({i, v});
  };
  auto iw = w.begin();
  auto ix = x.begin();
  while (iw != w.end() || ix != x.end()) {
    if (ix == x.end() || (iw != w.end() && iw->index < ix->index)) {
      push(iw->index, iw->value);
      ++iw;
    } else if (iw == w.end() || ix->index < iw->index) {
      push(ix->index, s * ix->value);
      ++ix;
    } else {
      push(iw->index, iw->value + s * ix->value);
      ++iw;
      ++ix;
    }
  }
  return SparseVector::from_sorted_unchecked(w.dimension(), std::move(out));
}

SparseVector scaled(const SparseVector& w, double s) {
  std::vector<Entry> out;
  out.reserve(w.l0_norm());
  for (const auto& e : w) {
    const double v = s * e.value;
    if (!is_zero(v)) out.push_back({e.index, v});
  }
  return SparseVector::from_sorted_unchecked(w.dimension(), std::move(out));
}

SparseVector truncate(const SparseVector& w, Budget budget) {
  const std::size_t b = budget.value();
  if (w.l0_norm() <= b) return w;
  std::vector<Entry> entries(w.begin(), w.end());
  auto larger = [](const Entry& p, const Entry& q) {
    const double ap = std::abs(p.value);
    const double aq = std::abs(q.value);
    return ap > aq || (ap == aq && p.index < q.index);
  };
  std::nth_element(entries.begin(), entries.begin() + b, entries.end(),
                   larger);
  entries.resize(b);
  std::sort(entries.begin(), entries.end(),
            [](const Entry& p, const Entry& q) { return p.index < q.index; });
  return SparseVector::from_sorted_unchecked(w.dimension(), std::move(entries));
}

SparseVector restrict_to(const SparseVector& w, std::span<const Index> keep) {
  std::vector<Index> sorted(keep.begin(), keep.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<Entry> out;
  auto ik = sorted.begin();
  for (const auto& e : w) {
    while (ik != sorted.end() && *ik < e.index) ++ik;
    if (ik == sorted.end()) break;
    if (*ik == e.index) out.push_back(e);
  }
  return SparseVector::from_sorted_unchecked(w.dimension(), std::move(out));
}

SparseVector project_l2_ball(const SparseVector& w, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  const double norm = l2_norm(w);
  if (norm == 0.0) return w;
  const double factor = std::min(1.0, 1.0 / (std::sqrt(lambda) * norm));
  if (factor == 1.0) return w;
  return scaled(w, factor);
}

std::vector<Index> support(const SparseVector& w) {
  std::vector<Index> out;
  out.reserve(w.l0_norm());
  for (const auto& e : w) out.push_back(e.index);
  return out;
}

}  // namespace negofs
