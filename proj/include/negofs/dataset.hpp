// Copyright 2026 The negofs Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "negofs/sparse_vector.hpp"

namespace negofs {

struct Instance {
  SparseVector x;
  int y;  // -1 or +1

  friend bool operator==(const Instance&, const Instance&) = default;
};

struct Dataset {
  std::string name;
  std::size_t dimension = 0;
  std::vector<Instance> instances;

  std::size_t size() const { return instances.size(); }
  friend bool operator==(const Dataset&, const Dataset&) = default;
};

// Parse failure in the sparse text format; line numbers are 1-based.
class ParseError : public std::runtime_error {
 public:
  enum class Kind {
    kMalformedToken,
    kMissingLabel,
    kUnsupportedLabel,
    kNonAscendingIndex,
    kDuplicateIndex,
    kNonBinaryLabels,
    kIndexBeyondDimension,
    kIo,
  };
  ParseError(Kind kind, std::size_t line, const std::string& what);
  Kind kind() const { return kind_; }
  std::size_t line() const { return line_; }

 private:
  Kind kind_;
  std::size_t line_;
};

// Sparse text format: "label idx:val idx:val ..." with 1-based ascending
// indices, '#' comments, LF or CRLF line endings. Label sets {-1,+1}, {0,1}
// and {1,2} are mapped onto {-1,+1}. The dimension is the largest index seen
// unless dimension_override is given.
Dataset parse_sparse_text(std::istream& in, std::string name = {},
                          std::optional<std::size_t> dimension_override = {});
Dataset load_sparse_text(const std::string& path,
                         std::optional<std::size_t> dimension_override = {});

// Writes labels as +1/-1 and values in shortest round-trip form.
void write_sparse_text(std::ostream& out, const Dataset& dataset);

// Feature scaling applied after loading. kUnitVariance divides each feature
// by its population standard deviation over the whole file (implicit zeros
// included, no centering, so sparsity is kept); features with zero spread are
// left alone. kUnitNorm rescales every instance to unit L2 norm. kBoth applies
// the variance step first.
enum class Scaling { kNone, kUnitVariance, kUnitNorm, kBoth };
Scaling parse_scaling(std::string_view text);  // none|std|unit|std-unit
std::string_view scaling_name(Scaling s);
void apply_scaling(Dataset& dataset, Scaling scaling);

// Seeded uniform permutation of [0, n).
std::vector<std::size_t> permute(std::size_t n, std::uint64_t seed);
std::vector<std::size_t> inverse_permutation(std::span<const std::size_t> perm);

// round-half-up(fraction * d), floored at 1.
Budget budget_for(std::size_t dimension, double fraction);

struct SyntheticSpec {
  std::size_t d = 200;
  std::size_t n_samples = 5000;
  std::size_t n_relevant = 10;
  double density = 0.1;
  double label_noise = 0.05;
  std::uint64_t seed = 7;

  void validate() const;
  // "d=..,relevant=..,n=..,density=..,noise=..[,seed=..]"
  static SyntheticSpec parse(const std::string& text);
};

struct SyntheticData {
  Dataset dataset;
  SparseVector planted;
  std::vector<Index> planted_support;
};

// Planted +-1 weights on n_relevant random indices; each instance has
// round(density * d) standard-normal coordinates; label = sgn(w* . x),
// flipped with probability label_noise.
SyntheticData generate_synthetic(const SyntheticSpec& spec);

}  // namespace negofs
