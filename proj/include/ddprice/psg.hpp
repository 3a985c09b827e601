#pragma once

#include <limits>
#include <string>

#include "ddprice/estimators.hpp"
#include "ddprice/schedule.hpp"

namespace ddprice {

/// Loop termination: stop before iteration k when k would exceed
/// max_iterations, or when the elapsed wall time reaches max_seconds.
/// Negative fields mean "unbounded"; at least one bound must be set.
struct StopRule {
  long max_iterations = -1;
  double max_seconds = -1.0;

  static StopRule iterations(long n) { return StopRule{n, -1.0}; }
  static StopRule seconds(double s) { return StopRule{-1, s}; }
  static StopRule either(long n, double s) { return StopRule{n, s}; }
};

/// How the reported iterate is chosen once the loop stops.
enum class OutputRule {
  kBestNer,      ///< iterate with the lowest estimated expected objective
  kRandomIndex,  ///< R drawn upfront from the guarantee distribution
  kFinal,        ///< last iterate
};

struct OutputPolicy {
  OutputRule rule = OutputRule::kBestNer;
  long ner_samples = 1000;  ///< draws per NER evaluation (kBestNer)
  double l_ef = 0.0;        ///< L_Ef constant for the weights (kRandomIndex)
  /// kBestNer scores at most this many trace rows (evenly spaced, always
  /// including the last); <= 0 scores every row.  Bounds the scoring cost of
  /// long wall-clock-budget runs.
  long ner_checkpoints = 256;
};

/// Baseline handling: tracked by OGD with steps zeta_k, or held fixed.
enum class BaselineMode { kOgd, kFixed };

struct PsgOptions {
  StopRule stop;
  OutputPolicy output;
  BaselineMode baseline = BaselineMode::kOgd;
  int threads = 1;
  StreamFamily sampling;  ///< minibatch streams; iteration 0 is reserved
  StreamFamily ner;       ///< NER evaluation streams, shared across methods
};

struct IterationRow {
  long k = 0;
  Vec x_md;                ///< point the minibatch was evaluated at
  double batch_mean_f = 0; ///< v_k (mean objective; mean cost when specialized)
  double delta = 0;        ///< baseline in effect at this iteration
  double elapsed_seconds = 0;
};

/// Full account of one optimization run.  All fields except the wall-time
/// ones are bit-reproducible for a fixed root seed and iteration-bounded
/// stop rule, independent of thread count.
struct RunRecord {
  std::string method;
  std::vector<IterationRow> trace;
  Vec output_x;
  long output_k = 0;  ///< 0 means the initial point
  double output_ner = std::numeric_limits<double>::quiet_NaN();
  std::string output_rule;
  long iterations = 0;
  double wall_seconds = 0.0;
  bool schedule_warning = false;  ///< some alpha_k fell outside (0, 1]
};

/// Projected accelerated stochastic gradient with the likelihood-ratio
/// minibatch estimator:
///   x_md = (1 - alpha_k) x_ag + alpha_k x
///   x    = proj(x - lambda_k g_k)
///   x_ag = proj(x_md - beta_k g_k)
/// with the baseline tracked across iterations.  x0 must lie in `box`;
/// |delta0| must not exceed the model's objective bound.
RunRecord run_psg(const ProblemModel& model, const FeasibleBox& box, const StepSchedule& schedule,
                  const Vec& x0, double delta0, const PsgOptions& options);

/// Same loop driven by the specialized multi-agent estimator; the baseline
/// tracks mean cost, so |delta0| must not exceed the model's cost bound.
RunRecord run_psg_specialized(const MultiAgentProblemModel& model, const FeasibleBox& box,
                              const StepSchedule& schedule, const Vec& x0, double delta0,
                              const PsgOptions& options);

/// Estimated expected objective ("net expected revenue" score) at x over
/// `samples` fresh draws; lower is better.  Uses streams.stream(0, ell) so
/// every candidate is scored with common random numbers.
double compute_ner(const ProblemModel& model, const Vec& x, long samples,
                   const StreamFamily& streams, int threads = 1);

/// Fills rec.output_* from rec.trace under `policy` (shared by the optimizer
/// and the comparison baselines).  An empty trace reports x0 as "initial".
/// `random_index_r` is the pre-drawn index for kRandomIndex (1-based).
/// `final_x`, when non-null, is the iterate the optimizer stopped at; kFinal
/// reports it instead of the last recorded candidate (methods that log the
/// pre-update point each iteration would otherwise drop their last step).
void select_run_output(RunRecord& rec, const ProblemModel& model, const Vec& x0,
                       const OutputPolicy& policy, const StreamFamily& ner, int threads,
                       long random_index_r = -1, const Vec* final_x = nullptr);

}  // namespace ddprice
