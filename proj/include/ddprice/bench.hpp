#pragma once

#include <functional>

#include "ddprice/baselines.hpp"
#include "ddprice/config.hpp"
#include "ddprice/synth.hpp"

namespace ddprice {

/// One configured comparison method.  `display` is the method line as
/// written (used to name CSV rows and to group the summary); the numeric
/// fields hold per-tag parameters with their defaults filled in.
struct MethodSpec {
  std::string display;
  std::string tag;
  long line = 0;

  double alpha = 1.0;   ///< l2-rgd regularization weight
  double eta = 0.01;    ///< l2-rgd step size
  long batch = 100;     ///< l2-rgd samples per step
  double shrink = 0.9;  ///< psd-ad backtracking factor
  long draws = 100;     ///< random-search draws per candidate
  bool ogd_baseline = true;  ///< proposed*: track delta by OGD (else fixed 0)
};

/// One benchmark instance: generated from the synthetic protocol or loaded
/// from a model spec file.
struct InstanceEntry {
  std::string id;
  bool from_file = false;
  std::string path;       ///< when from_file
  SyntheticConfig synth;  ///< when generated
};

/// Parses one method line ("<tag> key=value ..."); `origin`/`line` feed the
/// ConfigError location on malformed input.
MethodSpec parse_method_line(const std::string& text, const std::string& origin = "method",
                             long line = 0);

struct BenchConfig {
  std::uint64_t root_seed = 1;
  double budget_seconds = 60.0;  ///< per (instance, method); <= 0 disables
  long max_iterations = 20000;   ///< safety cap; <= 0 disables
  long ner_samples = 1000;
  long ner_checkpoints = 256;
  int threads = 1;
  bool record_wall = true;  ///< false writes 0.000 wall columns (byte-stable CSV)

  std::vector<InstanceEntry> instances;
  std::vector<MethodSpec> methods;

  /// Parses [bench] / [instances] / [methods]; throws ConfigError with
  /// origin:line on unknown tags, unknown keys or malformed values.
  static BenchConfig parse(const ConfigFile& cfg);
};

struct BenchRow {
  std::string instance;
  std::string method;
  std::string status;  ///< "ok" or the error message
  double ner = std::numeric_limits<double>::quiet_NaN();
  double wall_seconds = 0.0;
  long iterations = 0;
  Vec selected_x;
};

struct BenchResult {
  std::vector<BenchRow> rows;  ///< one per (instance, method), config order
};

/// Runs one configured method on one instance.  `instance_index` is the
/// 1-based position in the config; it keys the RNG stream families, and the
/// NER family is shared by every method on the instance (common random
/// numbers).  All methods start from x0 = proj(0.5 e) except random search.
RunRecord run_bench_method(const MethodSpec& method, const ProblemModel& model,
                           const MultiAgentProblemModel* multi_agent, const BenchConfig& cfg,
                           std::uint64_t instance_index);

/// Full sweep; a method failure produces a row with its error in `status`
/// instead of aborting the sweep.  `on_row` (optional) observes each
/// completed row in order.
BenchResult run_benchmark(const BenchConfig& cfg,
                          const std::function<void(const BenchRow&)>& on_row = {});

/// CSV with header instance,method,status,ner,wall_seconds,iterations,selected_x.
std::string bench_csv(const BenchResult& result);

struct SummaryRow {
  std::string method;
  long runs = 0;    ///< ok rows
  long errors = 0;  ///< error rows
  double mean_ner = std::numeric_limits<double>::quiet_NaN();
  double sd_ner = std::numeric_limits<double>::quiet_NaN();  ///< sample SD over instances
};

/// Aggregates a bench CSV per method (first-appearance order).
std::vector<SummaryRow> summarize_csv(const std::string& csv_text);
/// Fixed-width "NER (SD)" table.
std::string format_summary(const std::vector<SummaryRow>& rows);

}  // namespace ddprice
