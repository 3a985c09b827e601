#include "ddprice/psg.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <map>

namespace ddprice {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Lexicographic key over raw coordinate bytes; exact-equality memoization
/// so repeated iterates (e.g. pinned at the box boundary) are scored once.
struct VecBytesLess {
  bool operator()(const Vec& a, const Vec& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) < 0;
  }
};

RunRecord run_loop(
    const ProblemModel& model, const FeasibleBox& box, const StepSchedule& schedule, const Vec& x0,
    double delta0, const PsgOptions& options, double delta_cap, const char* method_tag,
    const std::function<GradientEstimate(const Vec&, double, long, long)>& batch_gradient) {
  require_dim(x0, box.dim(), "run_psg: x0");
  if (box.dim() != model.dim())
    throw std::invalid_argument("run_psg: box dimension does not match the model");
  if (!box.contains(x0)) throw std::invalid_argument("run_psg: x0 must lie in the feasible box");
  if (!(std::fabs(delta0) <= delta_cap))
    throw std::invalid_argument("run_psg: |delta0| exceeds the model's declared bound " +
                                std::to_string(delta_cap));
  const bool has_iter_bound = options.stop.max_iterations >= 0;
  const bool has_time_bound = options.stop.max_seconds >= 0.0;
  if (!has_iter_bound && !has_time_bound)
    throw std::invalid_argument("run_psg: stop rule must bound iterations or wall time");

  RunRecord rec;
  rec.method = method_tag;

  // kRandomIndex commits to R before the run, so it needs a deterministic
  // iteration count: a pure wall-clock budget is rejected.
  long random_index_r = -1;
  if (options.output.rule == OutputRule::kRandomIndex) {
    if (!has_iter_bound || has_time_bound)
      throw std::invalid_argument(
          "run_psg: random-index output requires an iteration-bounded stop rule");
    if (options.stop.max_iterations < 1)
      throw std::invalid_argument("run_psg: random-index output requires at least one iteration");
    RngStream r_stream = options.sampling.stream(0, 0);  // iteration 0 is reserved
    random_index_r =
        sample_output_index(options.stop.max_iterations, schedule, options.output.l_ef, r_stream);
  }

  const auto t0 = Clock::now();
  Vec x = x0;
  Vec x_ag = x0;
  BaselineState baseline{delta0, 1};

  for (long k = 1;; ++k) {
    if (has_iter_bound && k > options.stop.max_iterations) break;
    if (random_index_r > 0 && k > random_index_r) break;
    if (has_time_bound && seconds_since(t0) >= options.stop.max_seconds) break;

    const double alpha = schedule.alpha(k);
    const double beta = schedule.beta(k);
    const double lambda = schedule.lambda(k);
    const long batch = schedule.batch(k);
    if (!(beta > 0.0) || !(lambda > 0.0))
      throw std::invalid_argument("run_psg: schedule requires beta_k > 0 and lambda_k > 0 (k=" +
                                  std::to_string(k) + ")");
    if (batch < 1)
      throw std::invalid_argument("run_psg: schedule batch m_k must be >= 1 (k=" +
                                  std::to_string(k) + ")");
    if (!(alpha > 0.0 && alpha <= 1.0)) rec.schedule_warning = true;

    Vec x_md(x.size());
    for (std::size_t d = 0; d < x.size(); ++d)
      x_md[d] = (1.0 - alpha) * x_ag[d] + alpha * x[d];

    const GradientEstimate est = batch_gradient(x_md, baseline.delta, batch, k);

    x = project_box(axpy(x, -lambda, est.g), box);
    x_ag = project_box(axpy(x_md, -beta, est.g), box);

    IterationRow row;
    row.k = k;
    row.x_md = x_md;
    row.batch_mean_f = est.batch_mean_f;
    row.delta = baseline.delta;
    row.elapsed_seconds = seconds_since(t0);
    rec.trace.push_back(std::move(row));

    if (options.baseline == BaselineMode::kOgd)
      baseline = ogd_update(baseline, est.batch_mean_f, schedule.zeta(k + 1));
  }

  rec.iterations = static_cast<long>(rec.trace.size());
  rec.wall_seconds = seconds_since(t0);  // optimization only; scoring is post-hoc
  select_run_output(rec, model, x0, options.output, options.ner, options.threads, random_index_r,
                    &x_ag);
  return rec;
}

}  // namespace

void select_run_output(RunRecord& rec, const ProblemModel& model, const Vec& x0,
                       const OutputPolicy& policy, const StreamFamily& ner, int threads,
                       long random_index_r, const Vec* final_x) {
  if (rec.trace.empty()) {
    rec.output_x = x0;
    rec.output_k = 0;
    rec.output_rule = "initial";
    return;
  }
  switch (policy.rule) {
    case OutputRule::kFinal:
      rec.output_x = final_x != nullptr ? *final_x : rec.trace.back().x_md;
      rec.output_k = rec.trace.back().k;
      rec.output_rule = "final";
      break;
    case OutputRule::kRandomIndex: {
      if (random_index_r < 1 || random_index_r > static_cast<long>(rec.trace.size()))
        throw std::invalid_argument("select_run_output: random index outside the trace");
      rec.output_k = random_index_r;
      rec.output_x = rec.trace[static_cast<std::size_t>(random_index_r - 1)].x_md;
      rec.output_rule = "random_index";
      break;
    }
    case OutputRule::kBestNer: {
      const std::size_t rows = rec.trace.size();
      std::vector<std::size_t> picks;
      if (policy.ner_checkpoints > 0 &&
          rows > static_cast<std::size_t>(policy.ner_checkpoints)) {
        const std::size_t count = static_cast<std::size_t>(policy.ner_checkpoints);
        picks.reserve(count);
        for (std::size_t t = 1; t <= count; ++t) picks.push_back(t * rows / count - 1);
      } else {
        picks.resize(rows);
        for (std::size_t t = 0; t < rows; ++t) picks[t] = t;
      }
      std::map<Vec, double, VecBytesLess> memo;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t idx : picks) {
        const IterationRow& row = rec.trace[idx];
        auto it = memo.find(row.x_md);
        double score;
        if (it != memo.end()) {
          score = it->second;
        } else {
          score = compute_ner(model, row.x_md, policy.ner_samples, ner, threads);
          memo.emplace(row.x_md, score);
        }
        if (score < best) {
          best = score;
          rec.output_x = row.x_md;
          rec.output_k = row.k;
        }
      }
      rec.output_ner = best;
      rec.output_rule = "best_ner";
      break;
    }
  }
}

RunRecord run_psg(const ProblemModel& model, const FeasibleBox& box, const StepSchedule& schedule,
                  const Vec& x0, double delta0, const PsgOptions& options) {
  return run_loop(model, box, schedule, x0, delta0, options, model.f_max_bound(), "psg",
                  [&](const Vec& x_md, double delta, long batch, long k) {
                    return minibatch_gradient(model, x_md, delta, batch, options.sampling,
                                              static_cast<std::uint64_t>(k), options.threads);
                  });
}

RunRecord run_psg_specialized(const MultiAgentProblemModel& model, const FeasibleBox& box,
                              const StepSchedule& schedule, const Vec& x0, double delta0,
                              const PsgOptions& options) {
  return run_loop(model, box, schedule, x0, delta0, options, model.c_max_bound(),
                  "psg-specialized", [&](const Vec& x_md, double delta, long batch, long k) {
                    return specialized_gradient(model, x_md, delta, batch, options.sampling,
                                                static_cast<std::uint64_t>(k), options.threads);
                  });
}

double compute_ner(const ProblemModel& model, const Vec& x, long samples,
                   const StreamFamily& streams, int threads) {
  if (samples < 1) throw std::invalid_argument("compute_ner: samples must be >= 1");
  return mc_mean_objective(model, x, samples, streams, /*iteration=*/0, threads);
}

}  // namespace ddprice
