// Copyright 2026 The negofs Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "negofs/dataset.hpp"
#include "negofs/learners.hpp"
#include "negofs/moanofs.hpp"

namespace negofs {

enum class AlgorithmKind { kSingle, kBanofs, kManofs, kMoanofs };

struct Algorithm {
  AlgorithmKind kind = AlgorithmKind::kSingle;
  Variant variant = Variant::kPetrun;

  std::string name() const;
  // "single:<VARIANT>", "BANOFS", "MANOFS" or "MOANOFS"; a bare variant name
  // is accepted as single:<VARIANT>.
  static Algorithm parse(std::string_view text);
  static std::string valid_names();
};

struct ExperimentSpec {
  std::optional<std::string> dataset_path;
  std::optional<SyntheticSpec> synthetic;
  std::optional<std::size_t> dimension;
  Scaling scaling = Scaling::kNone;
  std::vector<Algorithm> algorithms;
  std::size_t runs = 10;
  std::uint64_t seed = 1;
  // k, t_max, fractions, trust, utility and timing settings; the roster is
  // rebuilt per run from roster_variants and learner_defaults.
  SystemConfig system;
  std::vector<Variant> roster_variants{Variant::kPetrun, Variant::kRomma, Variant::kAlma,
                                       Variant::kOgd,    Variant::kPa,    Variant::kSop,
                                       Variant::kCw,     Variant::kArow,  Variant::kScw};
  LearnerConfig learner_defaults;
  std::size_t threads = 1;

  void validate() const;
};

// Seed of run r (1-based).
std::uint64_t run_seed(std::uint64_t base, std::size_t r);

struct RunOutcome {
  std::size_t mistakes = 0;
  std::size_t instances = 0;
  double time = 0.0;
  SparseVector merged;

  double error_rate() const {
    return instances == 0 ? 0.0 : static_cast<double>(mistakes) / static_cast<double>(instances);
  }
};

struct ResultRow {
  std::string algorithm;
  std::string dataset;
  std::size_t budget = 0;
  std::size_t runs = 0;
  double mean_mistakes = 0.0;
  double std_mistakes = 0.0;
  double mean_error_rate = 0.0;
  double mean_time_s = 0.0;
};

std::vector<LearnerConfig> build_roster(const ExperimentSpec& spec, std::uint64_t seed);

// One algorithm on one permuted stream.
RunOutcome run_algorithm(const Dataset& dataset, std::span<const std::size_t> order,
                         const Algorithm& algorithm, const ExperimentSpec& spec,
                         std::uint64_t seed);

// Per-run outcomes for every algorithm, indexed [algorithm][run - 1].
std::vector<std::vector<RunOutcome>> run_all(const Dataset& dataset,
                                             const ExperimentSpec& spec);

ResultRow summarize(std::string algorithm, const Dataset& dataset, std::size_t budget,
                    std::span<const RunOutcome> runs);

std::vector<ResultRow> run_experiment(const Dataset& dataset, const ExperimentSpec& spec);

// algorithm,dataset,B,runs,mean_mistakes,std_mistakes,mean_error_rate,mean_time_s
void write_csv(std::ostream& out, std::span<const ResultRow> rows);
// One row per algorithm with "mean +- std (time s)" cells; the rows with the
// minimum mean error rate are flagged.
void write_markdown(std::ostream& out, std::span<const ResultRow> rows);

struct RecoveryRow {
  std::size_t run = 0;
  std::uint64_t seed = 0;
  std::size_t selected = 0;
  std::size_t planted = 0;
  std::size_t hits = 0;
  double precision = 0.0;
  double recall = 0.0;
};

// |selected & planted| / |selected| and / |planted|; empty sets score 0.
RecoveryRow score_recovery(std::span<const Index> selected, std::span<const Index> planted);

// MOANOFS on freshly generated synthetic data, one dataset per run.
std::vector<RecoveryRow> run_recovery(const ExperimentSpec& spec);
void write_recovery_csv(std::ostream& out, std::span<const RecoveryRow> rows);

// Command-line entry point: `negofs run|compare|recover [flags]`. Exit codes:
// 0 success, 2 bad flags or configuration, 3 dataset errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace negofs
