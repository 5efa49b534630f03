// Copyright 2026 The negofs Authors
// Licensed under the Apache License, Version 2.0

#include "negofs/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string_view>

#include "negofs/random.hpp"

namespace negofs {
namespace {

std::string at_line(std::size_t line, const std::string& msg) {
  return "line " + std::to_string(line) + ": " + msg;
}

template <typename T>
bool parse_number(std::string_view token, T& out) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  if (token.empty()) return false;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size();
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

struct RawInstance {
  std::vector<Entry> entries;
  int label;
};

}  // namespace

ParseError::ParseError(Kind kind, std::size_t line, const std::string& what)
    : std::runtime_error(what), kind_(kind), line_(line) {}

Dataset parse_sparse_text(std::istream& in, std::string name,
                          std::optional<std::size_t> dimension_override) {
  std::vector<RawInstance> raw;
  std::set<int> labels;
  std::size_t max_index = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (auto hash = view.find('#'); hash != std::string_view::npos)
      view = view.substr(0, hash);
    const auto tokens = split_ws(view);
    if (tokens.empty()) continue;

    if (tokens[0].find(':') != std::string_view::npos) {
      throw ParseError(ParseError::Kind::kMissingLabel, line_no,
                       at_line(line_no, "missing label"));
    }
    int label = 0;
    if (!parse_number(tokens[0], label)) {
      throw ParseError(ParseError::Kind::kMalformedToken, line_no,
                       at_line(line_no, "malformed label '" + std::string(tokens[0]) + "'"));
    }
    if (label < -1 || label > 2) {
      throw ParseError(ParseError::Kind::kUnsupportedLabel, line_no,
                       at_line(line_no, "unsupported label " + std::to_string(label)));
    }
    labels.insert(label);
    if (labels.size() > 2) {
      throw ParseError(ParseError::Kind::kNonBinaryLabels, line_no,
                       at_line(line_no, "non-binary labels"));
    }

    RawInstance inst;
    inst.label = label;
    std::size_t prev = 0;
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      const std::string_view tok = tokens[t];
      const std::size_t colon = tok.find(':');
      std::size_t index = 0;
      double value = 0.0;
      if (colon == std::string_view::npos || tok.front() == '+' ||
          !parse_number(tok.substr(0, colon), index) ||
          !parse_number(tok.substr(colon + 1), value) || index == 0 ||
          !std::isfinite(value)) {
        throw ParseError(ParseError::Kind::kMalformedToken, line_no,
                         at_line(line_no, "malformed token '" + std::string(tok) + "'"));
      }
      if (index == prev) {
        throw ParseError(ParseError::Kind::kDuplicateIndex, line_no,
                         at_line(line_no, "duplicate index " + std::to_string(index)));
      }
      if (index < prev) {
        throw ParseError(ParseError::Kind::kNonAscendingIndex, line_no,
                         at_line(line_no, "non-ascending index " + std::to_string(index)));
      }
      prev = index;
      max_index = std::max(max_index, index);
      if (dimension_override && index > *dimension_override) {
        throw ParseError(ParseError::Kind::kIndexBeyondDimension, line_no,
                         at_line(line_no, "index " + std::to_string(index) +
                                              " exceeds dimension " +
                                              std::to_string(*dimension_override)));
      }
      if (value != 0.0)
        inst.entries.push_back({static_cast<Index>(index - 1), value});
    }
    raw.push_back(std::move(inst));
  }
  if (in.bad()) throw ParseError(ParseError::Kind::kIo, line_no, "read error");

  auto subset_of = [&labels](std::initializer_list<int> allowed) {
    return std::all_of(labels.begin(), labels.end(), [&](int l) {
      return std::find(allowed.begin(), allowed.end(), l) != allowed.end();
    });
  };
  int negative = -1;
  if (subset_of({-1, 1})) {
    negative = -1;
  } else if (subset_of({0, 1})) {
    negative = 0;
  } else if (subset_of({1, 2})) {
    negative = 1;
  } else {
    throw ParseError(ParseError::Kind::kUnsupportedLabel, 0,
                     "unsupported label pair (expected {-1,+1}, {0,1} or {1,2})");
  }

  Dataset ds;
  ds.name = std::move(name);
  ds.dimension = dimension_override ? *dimension_override : std::max<std::size_t>(max_index, 1);
  ds.instances.reserve(raw.size());
  for (auto& r : raw) {
    ds.instances.push_back(
        {SparseVector::from_sorted_unchecked(ds.dimension, std::move(r.entries)),
         r.label == negative ? -1 : +1});
  }
  return ds;
}

Dataset load_sparse_text(const std::string& path,
                         std::optional<std::size_t> dimension_override) {
  std::ifstream in(path);
  if (!in) throw ParseError(ParseError::Kind::kIo, 0, "cannot open '" + path + "'");
  std::string name = path;
  if (auto slash = name.find_last_of('/'); slash != std::string::npos)
    name = name.substr(slash + 1);
  if (auto dot = name.find_last_of('.'); dot != std::string::npos && dot > 0)
    name = name.substr(0, dot);
  return parse_sparse_text(in, name, dimension_override);
}

void write_sparse_text(std::ostream& out, const Dataset& dataset) {
  char buf[64];
  for (const auto& inst : dataset.instances) {
    out << (inst.y > 0 ? "+1" : "-1");
    for (const auto& e : inst.x) {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, e.value);
      out << ' ' << (e.index + 1) << ':' << std::string_view(buf, ptr - buf);
    }
    out << '\n';
  }
}

Scaling parse_scaling(std::string_view text) {
  if (text == "none") return Scaling::kNone;
  if (text == "std") return Scaling::kUnitVariance;
  if (text == "unit") return Scaling::kUnitNorm;
  if (text == "std-unit") return Scaling::kBoth;
  throw std::invalid_argument("unknown scaling '" + std::string(text) +
                              "' (expected none|std|unit|std-unit)");
}

std::string_view scaling_name(Scaling s) {
  switch (s) {
    case Scaling::kNone: return "none";
    case Scaling::kUnitVariance: return "std";
    case Scaling::kUnitNorm: return "unit";
    case Scaling::kBoth: return "std-unit";
  }
  return "none";
}

void apply_scaling(Dataset& dataset, Scaling scaling) {
  if (scaling == Scaling::kNone || dataset.instances.empty()) return;
  if (scaling == Scaling::kUnitVariance || scaling == Scaling::kBoth) {
    const double n = static_cast<double>(dataset.size());
    std::vector<double> sum(dataset.dimension, 0.0), sq(dataset.dimension, 0.0);
    for (const auto& inst : dataset.instances) {
      for (const auto& e : inst.x) {
        sum[e.index] += e.value;
        sq[e.index] += e.value * e.value;
      }
    }
    std::vector<double> inv(dataset.dimension, 1.0);
    for (std::size_t j = 0; j < dataset.dimension; ++j) {
      const double mean = sum[j] / n;
      const double var = std::max(0.0, sq[j] / n - mean * mean);
      if (var > 0.0) inv[j] = 1.0 / std::sqrt(var);
    }
    for (auto& inst : dataset.instances) {
      std::vector<Entry> entries(inst.x.begin(), inst.x.end());
      for (auto& e : entries) e.value *= inv[e.index];
      inst.x = SparseVector::from_entries(dataset.dimension, std::move(entries));
    }
  }
  if (scaling == Scaling::kUnitNorm || scaling == Scaling::kBoth) {
    for (auto& inst : dataset.instances) {
      const double norm = l2_norm(inst.x);
      if (norm > 0.0) inst.x = scaled(inst.x, 1.0 / norm);
    }
  }
}

std::vector<std::size_t> permute(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  return random_permutation(n, rng);
}

std::vector<std::size_t> inverse_permutation(std::span<const std::size_t> perm) {
  std::vector<std::size_t> inv(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = i;
  return inv;
}

Budget budget_for(std::size_t dimension, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw std::invalid_argument("budget fraction must lie in (0, 1]");
  const double raw = std::floor(fraction * static_cast<double>(dimension) + 0.5);
  const auto b = static_cast<std::size_t>(raw);
  return Budget(std::clamp<std::size_t>(b, 1, std::max<std::size_t>(dimension, 1)));
}

void SyntheticSpec::validate() const {
  if (d == 0 || n_samples == 0) throw std::invalid_argument("synthetic d and n must be positive");
  if (n_relevant == 0 || n_relevant > d)
    throw std::invalid_argument("synthetic relevant count must lie in [1, d]");
  if (!(density > 0.0 && density <= 1.0))
    throw std::invalid_argument("synthetic density must lie in (0, 1]");
  if (!(label_noise >= 0.0 && label_noise < 0.5))
    throw std::invalid_argument("synthetic noise must lie in [0, 0.5)");
}

SyntheticSpec SyntheticSpec::parse(const std::string& text) {
  SyntheticSpec spec;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("malformed synthetic spec item '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string_view value = std::string_view(item).substr(eq + 1);
    bool ok = false;
    if (key == "d") ok = parse_number(value, spec.d);
    else if (key == "relevant") ok = parse_number(value, spec.n_relevant);
    else if (key == "n") ok = parse_number(value, spec.n_samples);
    else if (key == "density") ok = parse_number(value, spec.density);
    else if (key == "noise") ok = parse_number(value, spec.label_noise);
    else if (key == "seed") ok = parse_number(value, spec.seed);
    else throw std::invalid_argument("unknown synthetic spec key '" + key + "'");
    if (!ok) throw std::invalid_argument("malformed synthetic spec value '" + item + "'");
  }
  spec.validate();
  return spec;
}

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  SyntheticData out;
  auto picked = permutation_prefix(spec.d, spec.n_relevant, rng);
  std::sort(picked.begin(), picked.end());
  std::vector<Entry> planted;
  for (std::size_t idx : picked) {
    const double v = rng.bernoulli(0.5) ? 1.0 : -1.0;
    planted.push_back({static_cast<Index>(idx), v});
    out.planted_support.push_back(static_cast<Index>(idx));
  }
  out.planted = SparseVector::from_sorted_unchecked(spec.d, std::move(planted));

  const auto nnz = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::floor(spec.density * spec.d + 0.5)), 1, spec.d);
  Dataset& ds = out.dataset;
  ds.name = "synthetic";
  ds.dimension = spec.d;
  ds.instances.reserve(spec.n_samples);
  for (std::size_t n = 0; n < spec.n_samples; ++n) {
    auto coords = permutation_prefix(spec.d, nnz, rng);
    std::vector<Entry> entries;
    entries.reserve(nnz);
    for (std::size_t idx : coords) entries.push_back({static_cast<Index>(idx), rng.standard_normal()});
    SparseVector x = SparseVector::from_entries(spec.d, std::move(entries));
    int y = dot(out.planted, x) > 0.0 ? +1 : -1;
    if (rng.bernoulli(spec.label_noise)) y = -y;
    ds.instances.push_back({std::move(x), y});
  }
  return out;
}

}  // namespace negofs
