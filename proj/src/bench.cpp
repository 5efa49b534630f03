// Copyright 2026 The negofs Authors
// Licensed under the Apache License, Version 2.0

#include "negofs/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

namespace negofs {
namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

std::size_t thread_cap(std::size_t runs) {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("NEGOFS_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && v > 0) n = std::min<std::size_t>(n, v);
  }
  return std::max<std::size_t>(1, std::min(n, runs));
}

// Runs fn(r) for r in [1, runs] on up to `threads` workers.
template <typename Fn>
void parallel_runs(std::size_t runs, std::size_t threads, Fn fn) {
  std::atomic<std::size_t> next{1};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t r = next++; r <= runs; r = next++) {
      try {
        fn(r);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

std::string Algorithm::name() const {
  switch (kind) {
    case AlgorithmKind::kSingle: return "single:" + std::string(variant_name(variant));
    case AlgorithmKind::kBanofs: return "BANOFS";
    case AlgorithmKind::kManofs: return "MANOFS";
    case AlgorithmKind::kMoanofs: return "MOANOFS";
  }
  return "?";
}

std::string Algorithm::valid_names() {
  std::string names = "BANOFS, MANOFS, MOANOFS";
  for (Variant v : kAllVariants) names += ", single:" + std::string(variant_name(v));
  return names;
}

Algorithm Algorithm::parse(std::string_view text) {
  const std::string u = upper(text);
  if (u == "BANOFS") return {AlgorithmKind::kBanofs, Variant::kPetrun};
  if (u == "MANOFS") return {AlgorithmKind::kManofs, Variant::kPetrun};
  if (u == "MOANOFS") return {AlgorithmKind::kMoanofs, Variant::kPetrun};
  std::string_view v = text;
  if (u.rfind("SINGLE:", 0) == 0) v = text.substr(7);
  try {
    return {AlgorithmKind::kSingle, parse_variant(v)};
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("unknown algorithm '" + std::string(text) +
                                "' (valid: " + valid_names() + ")");
  }
}

void ExperimentSpec::validate() const {
  if (runs == 0) throw std::invalid_argument("runs must be at least 1");
  if (algorithms.empty()) throw std::invalid_argument("at least one algorithm is required");
  if (roster_variants.size() < 2) throw std::invalid_argument("roster needs at least two learners");
  if (system.k < 2 || system.k > roster_variants.size())
    throw std::invalid_argument("k must lie in [2, roster size]");
}

std::uint64_t run_seed(std::uint64_t base, std::size_t r) {
  return base * 1000003u + static_cast<std::uint64_t>(r);
}

std::vector<LearnerConfig> build_roster(const ExperimentSpec& spec, std::uint64_t seed) {
  std::vector<LearnerConfig> roster;
  for (std::size_t i = 0; i < spec.roster_variants.size(); ++i) {
    LearnerConfig c = spec.learner_defaults;
    c.variant = spec.roster_variants[i];
    c.seed = seed * 1000003u + i;
    c.timing = spec.system.timing;
    roster.push_back(c);
  }
  return roster;
}

RunOutcome run_algorithm(const Dataset& dataset, std::span<const std::size_t> order,
                         const Algorithm& algorithm, const ExperimentSpec& spec,
                         std::uint64_t seed) {
  const Budget budget = budget_for(dataset.dimension, spec.system.budget_fraction);
  RunOutcome out;
  if (algorithm.kind == AlgorithmKind::kSingle) {
    LearnerConfig c = spec.learner_defaults;
    c.variant = algorithm.variant;
    c.budget = budget;
    c.seed = seed;
    c.timing = spec.system.timing;
    Learner learner(c, dataset.dimension);
    for (std::size_t i : order) {
      const Instance& inst = dataset.instances[i];
      learner.step(inst.x, inst.y);
    }
    out.mistakes = learner.state().mistakes;
    out.instances = order.size();
    out.time = learner.state().cumulative_time;
    out.merged = learner.state().w;
    return out;
  }
  SystemConfig cfg = spec.system;
  cfg.seed = seed;
  RunReport report;
  if (algorithm.kind == AlgorithmKind::kBanofs) {
    ExperimentSpec pair = spec;
    pair.roster_variants = {Variant::kRand, Variant::kPetrun};
    cfg.roster = build_roster(pair, seed);
    report = run_manofs(dataset, order, cfg);
  } else {
    cfg.roster = build_roster(spec, seed);
    report = algorithm.kind == AlgorithmKind::kManofs ? run_manofs(dataset, order, cfg)
                                                      : run_moanofs(dataset, order, cfg);
  }
  out.mistakes = report.system_mistakes;
  out.instances = report.system_instances;
  out.time = report.cost_time;
  out.merged = std::move(report.merged);
  return out;
}

std::vector<std::vector<RunOutcome>> run_all(const Dataset& dataset,
                                             const ExperimentSpec& spec) {
  std::vector<std::vector<RunOutcome>> outcomes(
      spec.algorithms.size(), std::vector<RunOutcome>(spec.runs));
  parallel_runs(spec.runs, std::min(spec.threads, thread_cap(spec.runs)), [&](std::size_t r) {
    const std::uint64_t seed = run_seed(spec.seed, r);
    const auto order = permute(dataset.size(), seed);
    for (std::size_t a = 0; a < spec.algorithms.size(); ++a)
      outcomes[a][r - 1] = run_algorithm(dataset, order, spec.algorithms[a], spec, seed);
  });
  return outcomes;
}

ResultRow summarize(std::string algorithm, const Dataset& dataset, std::size_t budget,
                    std::span<const RunOutcome> runs) {
  ResultRow row;
  row.algorithm = std::move(algorithm);
  row.dataset = dataset.name;
  row.budget = budget;
  row.runs = runs.size();
  const double n = static_cast<double>(runs.size());
  for (const auto& r : runs) {
    row.mean_mistakes += static_cast<double>(r.mistakes) / n;
    row.mean_error_rate += r.error_rate() / n;
    row.mean_time_s += r.time / n;
  }
  if (runs.size() > 1) {
    double ss = 0.0;
    for (const auto& r : runs) {
      const double dm = static_cast<double>(r.mistakes) - row.mean_mistakes;
      ss += dm * dm;
    }
    row.std_mistakes = std::sqrt(ss / (n - 1.0));
  }
  return row;
}

std::vector<ResultRow> run_experiment(const Dataset& dataset, const ExperimentSpec& spec) {
  spec.validate();
  const auto outcomes = run_all(dataset, spec);
  const std::size_t budget = budget_for(dataset.dimension, spec.system.budget_fraction).value();
  std::vector<ResultRow> rows;
  for (std::size_t a = 0; a < spec.algorithms.size(); ++a)
    rows.push_back(summarize(spec.algorithms[a].name(), dataset, budget, outcomes[a]));
  return rows;
}

void write_csv(std::ostream& out, std::span<const ResultRow> rows) {
  out << "algorithm,dataset,B,runs,mean_mistakes,std_mistakes,mean_error_rate,mean_time_s\n";
  for (const auto& r : rows) {
    out << r.algorithm << ',' << r.dataset << ',' << r.budget << ',' << r.runs << ','
        << fixed6(r.mean_mistakes) << ',' << fixed6(r.std_mistakes) << ','
        << fixed6(r.mean_error_rate) << ',' << fixed6(r.mean_time_s) << '\n';
  }
}

void write_markdown(std::ostream& out, std::span<const ResultRow> rows) {
  double best = 2.0;
  for (const auto& r : rows) best = std::min(best, r.mean_error_rate);
  const std::string dataset = rows.empty() ? "" : rows.front().dataset;
  const std::size_t budget = rows.empty() ? 0 : rows.front().budget;
  out << "| Algorithm | " << dataset << " (B=" << budget << ") | error rate | best |\n";
  out << "|---|---|---|---|\n";
  for (const auto& r : rows) {
    out << "| " << r.algorithm << " | " << fixed6(r.mean_mistakes) << " ± "
        << fixed6(r.std_mistakes) << " (" << fixed6(r.mean_time_s) << "s) | "
        << fixed6(r.mean_error_rate) << " | " << (r.mean_error_rate == best ? "*" : "")
        << " |\n";
  }
}

RecoveryRow score_recovery(std::span<const Index> selected, std::span<const Index> planted) {
  RecoveryRow row;
  const std::set<Index> sel(selected.begin(), selected.end());
  const std::set<Index> pl(planted.begin(), planted.end());
  row.selected = sel.size();
  row.planted = pl.size();
  for (Index i : sel) row.hits += pl.count(i);
  row.precision = sel.empty() ? 0.0 : static_cast<double>(row.hits) / static_cast<double>(sel.size());
  row.recall = pl.empty() ? 0.0 : static_cast<double>(row.hits) / static_cast<double>(pl.size());
  return row;
}

std::vector<RecoveryRow> run_recovery(const ExperimentSpec& spec) {
  if (!spec.synthetic) throw std::invalid_argument("recover requires --synthetic");
  if (spec.runs == 0) throw std::invalid_argument("runs must be at least 1");
  std::vector<RecoveryRow> rows(spec.runs);
  parallel_runs(spec.runs, std::min(spec.threads, thread_cap(spec.runs)), [&](std::size_t r) {
    const std::uint64_t seed = run_seed(spec.seed, r);
    SyntheticSpec s = *spec.synthetic;
    s.seed = seed;
    const SyntheticData data = generate_synthetic(s);
    const auto order = permute(data.dataset.size(), seed);
    const RunOutcome outcome =
        run_algorithm(data.dataset, order, {AlgorithmKind::kMoanofs, Variant::kPetrun}, spec, seed);
    const auto selected = support(outcome.merged);
    RecoveryRow row = score_recovery(selected, data.planted_support);
    row.run = r;
    row.seed = seed;
    rows[r - 1] = row;
  });
  return rows;
}

void write_recovery_csv(std::ostream& out, std::span<const RecoveryRow> rows) {
  out << "run,seed,selected,planted,hits,precision,recall\n";
  double p = 0.0, rc = 0.0;
  for (const auto& r : rows) {
    out << r.run << ',' << r.seed << ',' << r.selected << ',' << r.planted << ',' << r.hits
        << ',' << fixed6(r.precision) << ',' << fixed6(r.recall) << '\n';
    p += r.precision;
    rc += r.recall;
  }
  if (!rows.empty()) {
    const double n = static_cast<double>(rows.size());
    out << "mean,,,,," << fixed6(p / n) << ',' << fixed6(rc / n) << '\n';
  }
}

namespace {

struct CliOptions {
  std::string dataset;
  std::string synthetic;
  std::string algorithms = "MOANOFS";
  std::string roster;
  double budget_fraction = 0.1;
  std::size_t runs = 10;
  std::uint64_t seed = 1;
  std::size_t k = 3;
  std::size_t tmax = 10;
  double calibration = 0.2;
  std::string issue_weights = "0.2,0.5,0.3";
  std::string conflict_rule = "min-error";
  double trust_c = 0.5;
  double trust_threshold = 0.25;
  double epsilon = 0.0;
  std::size_t dim = 0;
  std::string output;
  std::string format;
  std::string timing = "cpu";
  std::string prediction = "leader";
  std::string scale = "none";
  double eta = 0.2, lambda = 0.01, r = 1.0, confidence = 0.7, C = 1.0;
  bool fofs_margin = false;
};

void add_common(CLI::App* sub, CliOptions& o) {
  sub->add_option("--dataset", o.dataset, "Sparse text dataset path");
  sub->add_option("--synthetic", o.synthetic,
                  "Synthetic stream d=..,relevant=..,n=..,density=..,noise=..[,seed=..]");
  sub->add_option("--algorithms", o.algorithms,
                  "Comma-separated list of single:<VARIANT>, BANOFS, MANOFS, MOANOFS");
  sub->add_option("--roster", o.roster, "Comma-separated learner variants for MANOFS/MOANOFS");
  sub->add_option("--budget-fraction", o.budget_fraction, "Selected features as a fraction of d");
  sub->add_option("--runs", o.runs, "Repetitions over random permutations");
  sub->add_option("--seed", o.seed, "Base seed");
  sub->add_option("--k", o.k, "Learners elected at Level 1");
  sub->add_option("--tmax", o.tmax, "Negotiation trials (0 = one per instance)");
  sub->add_option("--calibration", o.calibration, "Level-1 calibration fraction");
  sub->add_option("--issue-weights", o.issue_weights, "Trust,Error,CostTime weights");
  sub->add_option("--conflict-rule", o.conflict_rule, "min-error|min-utility");
  sub->add_option("--trust-c", o.trust_c, "Trust recurrence constant c");
  sub->add_option("--trust-threshold", o.trust_threshold, "Trust recurrence threshold");
  sub->add_option("--epsilon", o.epsilon, "Feature trust increment (0 = 1/n)");
  sub->add_option("--dim", o.dim, "Dimension override for the dataset");
  sub->add_option("--scale", o.scale, "Feature scaling after loading: none|std|unit|std-unit");
  sub->add_option("--output", o.output, "Output path (default stdout)");
  sub->add_option("--format", o.format, "csv|markdown");
  sub->add_option("--timing", o.timing, "cpu|work");
  sub->add_option("--system-prediction", o.prediction, "merged|leader");
  sub->add_option("--eta", o.eta, "Learning rate");
  sub->add_option("--lambda", o.lambda, "Regularization");
  sub->add_option("--r", o.r, "Second-order regularizer");
  sub->add_option("--confidence", o.confidence, "CW/SCW confidence");
  sub->add_option("--C", o.C, "PA/SCW aggressiveness");
  sub->add_flag("--fofs-margin", o.fofs_margin, "FOFS updates on margin violations");
}

ExperimentSpec build_spec(const CliOptions& o) {
  ExperimentSpec spec;
  if (!o.dataset.empty()) spec.dataset_path = o.dataset;
  if (!o.synthetic.empty()) spec.synthetic = SyntheticSpec::parse(o.synthetic);
  if (spec.dataset_path && spec.synthetic)
    throw std::invalid_argument("--dataset and --synthetic are mutually exclusive");
  if (o.dim > 0) spec.dimension = o.dim;
  spec.scaling = parse_scaling(o.scale);
  for (const auto& name : split(o.algorithms, ',')) spec.algorithms.push_back(Algorithm::parse(name));
  if (!o.roster.empty()) {
    spec.roster_variants.clear();
    for (const auto& name : split(o.roster, ',')) spec.roster_variants.push_back(parse_variant(name));
  }
  spec.runs = o.runs;
  spec.seed = o.seed;
  spec.threads = thread_cap(o.runs);
  SystemConfig& sys = spec.system;
  sys.k = o.k;
  sys.budget_fraction = o.budget_fraction;
  sys.t_max = o.tmax;
  sys.calibration_fraction = o.calibration;
  sys.issue_weights = IssueWeightProfile::parse(o.issue_weights);
  sys.conflict_rule = parse_conflict_rule(o.conflict_rule);
  sys.trust_params.c = o.trust_c;
  sys.trust_params.threshold = o.trust_threshold;
  sys.trust_params.validate();
  sys.epsilon = o.epsilon;
  sys.timing = parse_timing(o.timing);
  sys.prediction = parse_system_prediction(o.prediction);
  if (!(o.budget_fraction > 0.0 && o.budget_fraction <= 1.0))
    throw std::invalid_argument("budget fraction must lie in (0, 1]");
  if (!(o.calibration > 0.0 && o.calibration < 1.0))
    throw std::invalid_argument("calibration fraction must lie in (0, 1)");
  if (o.epsilon < 0.0) throw std::invalid_argument("epsilon must be non-negative");
  LearnerConfig& lc = spec.learner_defaults;
  lc.eta = o.eta;
  lc.lambda = o.lambda;
  lc.r = o.r;
  lc.confidence = o.confidence;
  lc.C = o.C;
  lc.fofs_margin_trigger = o.fofs_margin;
  lc.validate(std::numeric_limits<std::size_t>::max());
  return spec;
}

Dataset load_dataset(const ExperimentSpec& spec) {
  Dataset ds = spec.synthetic ? generate_synthetic(*spec.synthetic).dataset
                              : load_sparse_text(*spec.dataset_path, spec.dimension);
  apply_scaling(ds, spec.scaling);
  return ds;
}

class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const std::string& path, std::ostream& out, const std::string& text) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << text;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Negotiation-based online feature selection benchmark"};
  app.require_subcommand(1);
  CliOptions opts;
  auto* run = app.add_subcommand("run", "Repeated permuted runs, CSV or markdown summary");
  auto* compare = app.add_subcommand("compare", "Comparison table of two or more algorithms");
  auto* recover = app.add_subcommand("recover", "Planted-feature recovery on synthetic data");
  for (auto* sub : {run, compare, recover}) add_common(sub, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  ExperimentSpec spec;
  try {
    spec = build_spec(opts);
    if (!spec.dataset_path && !spec.synthetic)
      throw std::invalid_argument("either --dataset or --synthetic is required");
    if (!recover->parsed()) spec.validate();
    if (compare->parsed() && spec.algorithms.size() < 2)
      throw std::invalid_argument("compare needs at least two algorithms");
    if (!opts.format.empty() && opts.format != "csv" && opts.format != "markdown")
      throw std::invalid_argument("unknown format '" + opts.format + "' (expected csv|markdown)");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (recover->parsed()) {
      const auto rows = run_recovery(spec);
      std::ostringstream text;
      write_recovery_csv(text, rows);
      emit(opts.output, out, text.str());
      return 0;
    }
    Dataset dataset;
    try {
      dataset = load_dataset(spec);
    } catch (const ParseError& e) {
      err << "dataset error: " << e.what() << '\n';
      return 3;
    }
    const auto rows = run_experiment(dataset, spec);
    std::ostringstream csv;
    write_csv(csv, rows);
    if (compare->parsed()) {
      std::ostringstream md;
      write_markdown(md, rows);
      if (opts.format == "csv") {
        emit(opts.output, out, csv.str());
      } else {
        emit(opts.output, out, md.str());
        if (!opts.output.empty()) emit(opts.output + ".csv", out, csv.str());
      }
      return 0;
    }
    if (opts.format == "markdown") {
      std::ostringstream md;
      write_markdown(md, rows);
      emit(opts.output, out, md.str());
    } else {
      emit(opts.output, out, csv.str());
    }
    return 0;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace negofs
