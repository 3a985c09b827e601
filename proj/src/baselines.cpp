#include "ddprice/baselines.hpp"

#include <chrono>
#include <cmath>

#include "ddprice/oracle.hpp"

namespace ddprice {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void check_common(const FeasibleBox& box, const ProblemModel& model,
                  const BaselineOptions& options, const char* who) {
  if (box.dim() != model.dim())
    throw std::invalid_argument(std::string(who) + ": box dimension does not match the model");
  if (options.stop.max_iterations < 0 && options.stop.max_seconds < 0.0)
    throw std::invalid_argument(std::string(who) +
                                ": stop rule must bound iterations or wall time");
  if (options.output.rule == OutputRule::kRandomIndex)
    throw std::invalid_argument(std::string(who) +
                                ": random-index output applies only to the proposed optimizer");
}

bool keep_going(long k, const StopRule& stop, Clock::time_point t0) {
  if (stop.max_iterations >= 0 && k > stop.max_iterations) return false;
  if (stop.max_seconds >= 0.0 && seconds_since(t0) >= stop.max_seconds) return false;
  return true;
}

}  // namespace

double spsa_c(long k) {
  if (k < 1) throw std::invalid_argument("spsa_c: iterations start at k = 1");
  return 1.0 / std::pow(static_cast<double>(k), 0.101);
}

double spsa_a(long k) {
  if (k < 1) throw std::invalid_argument("spsa_a: iterations start at k = 1");
  return 0.16 / std::pow(100.0 + static_cast<double>(k), 0.602);
}

RunRecord run_l2_rgd(const ProblemModel& model, const FeasibleBox& box, const Vec& x0,
                     double alpha, double eta, long batch, const BaselineOptions& options) {
  check_common(box, model, options, "run_l2_rgd");
  require_dim(x0, box.dim(), "run_l2_rgd: x0");
  if (!box.contains(x0))
    throw std::invalid_argument("run_l2_rgd: x0 must lie in the feasible box");
  if (!(alpha >= 0.0)) throw std::invalid_argument("run_l2_rgd: alpha must be nonnegative");
  if (!(eta > 0.0)) throw std::invalid_argument("run_l2_rgd: eta must be positive");
  if (batch < 1) throw std::invalid_argument("run_l2_rgd: batch must be >= 1");

  RunRecord rec;
  rec.method = "l2-rgd";
  const auto t0 = Clock::now();
  Vec x = x0;

  for (long k = 1; keep_going(k, options.stop, t0); ++k) {
    Vec g_sum(x.size(), 0.0);
    double f_sum = 0.0;
    for (long ell = 0; ell < batch; ++ell) {
      RngStream rng = options.sampling.stream(static_cast<std::uint64_t>(k),
                                              static_cast<std::uint64_t>(ell));
      const Vec xi = model.sample_one(x, rng);
      const Vec gi = model.objective_grad_x(x, xi);
      for (std::size_t d = 0; d < x.size(); ++d) g_sum[d] += gi[d];
      f_sum += model.objective(x, xi);
    }

    IterationRow row;
    row.k = k;
    row.x_md = x;
    row.batch_mean_f = f_sum / static_cast<double>(batch);
    row.elapsed_seconds = seconds_since(t0);
    rec.trace.push_back(std::move(row));

    Vec step(x.size());
    for (std::size_t d = 0; d < x.size(); ++d)
      step[d] = g_sum[d] / static_cast<double>(batch) + alpha * (x[d] - x0[d]);
    x = project_box(axpy(x, -eta, step), box);
  }

  rec.iterations = static_cast<long>(rec.trace.size());
  rec.wall_seconds = seconds_since(t0);  // optimization only; scoring is post-hoc
  select_run_output(rec, model, x0, options.output, options.ner, options.threads, -1, &x);
  return rec;
}

RunRecord run_spsa(const ProblemModel& model, const FeasibleBox& box, const Vec& x0,
                   const BaselineOptions& options) {
  check_common(box, model, options, "run_spsa");
  require_dim(x0, box.dim(), "run_spsa: x0");
  if (!box.contains(x0)) throw std::invalid_argument("run_spsa: x0 must lie in the feasible box");

  RunRecord rec;
  rec.method = "spsa";
  const auto t0 = Clock::now();
  Vec x = x0;

  for (long k = 1; keep_going(k, options.stop, t0); ++k) {
    const double c = spsa_c(k);
    const double a = spsa_a(k);

    RngStream perturb = options.sampling.stream(static_cast<std::uint64_t>(k), 0);
    Vec delta(x.size());
    for (double& d : delta) d = perturb.next_rademacher();

    const Vec x_plus = project_box(axpy(x, c, delta), box);
    const Vec x_minus = project_box(axpy(x, -c, delta), box);

    RngStream rng_plus = options.sampling.stream(static_cast<std::uint64_t>(k), 1);
    RngStream rng_minus = options.sampling.stream(static_cast<std::uint64_t>(k), 2);
    const double f_plus = model.objective(x_plus, model.sample_one(x_plus, rng_plus));
    const double f_minus = model.objective(x_minus, model.sample_one(x_minus, rng_minus));

    IterationRow row;
    row.k = k;
    row.x_md = x;
    row.batch_mean_f = 0.5 * (f_plus + f_minus);
    row.elapsed_seconds = seconds_since(t0);
    rec.trace.push_back(std::move(row));

    const double slope = (f_plus - f_minus) / (2.0 * c);
    Vec ghat(x.size());
    for (std::size_t d = 0; d < x.size(); ++d) ghat[d] = slope * delta[d];
    x = project_box(axpy(x, -a, ghat), box);
  }

  rec.iterations = static_cast<long>(rec.trace.size());
  rec.wall_seconds = seconds_since(t0);  // optimization only; scoring is post-hoc
  select_run_output(rec, model, x0, options.output, options.ner, options.threads, -1, &x);
  return rec;
}

RunRecord run_psd_ad(const MultiAgentProblemModel& model, const FeasibleBox& box, const Vec& x0,
                     double shrink, const BaselineOptions& options) {
  check_common(box, model, options, "run_psd_ad");
  require_dim(x0, box.dim(), "run_psd_ad: x0");
  if (!box.contains(x0))
    throw std::invalid_argument("run_psd_ad: x0 must lie in the feasible box");
  if (!(shrink > 0.0 && shrink < 1.0))
    throw std::invalid_argument("run_psd_ad: shrink factor must lie in (0, 1)");

  constexpr double kStepFloor = 1e-12;
  constexpr double kFdStep = 1e-6;
  const auto proxy = [&](const Vec& p) { return model.objective_at_mean(p); };

  RunRecord rec;
  rec.method = "psd-ad";
  const auto t0 = Clock::now();
  Vec x = x0;
  double f_cur = proxy(x);
  double step = 1.0;

  for (long k = 1; keep_going(k, options.stop, t0); ++k) {
    const Vec g = finite_diff_gradient(proxy, x, kFdStep);

    double trial = step;
    bool accepted = false;
    while (trial >= kStepFloor) {
      const Vec cand = project_box(axpy(x, -trial, g), box);
      const double f_cand = proxy(cand);
      if (f_cand < f_cur) {
        x = cand;
        f_cur = f_cand;
        step = trial;
        accepted = true;
        break;
      }
      trial *= shrink;
    }
    (void)accepted;  // a failed search leaves the iterate unchanged

    IterationRow row;
    row.k = k;
    row.x_md = x;
    row.batch_mean_f = f_cur;
    row.elapsed_seconds = seconds_since(t0);
    rec.trace.push_back(std::move(row));
  }

  rec.iterations = static_cast<long>(rec.trace.size());
  rec.wall_seconds = seconds_since(t0);  // optimization only; scoring is post-hoc
  select_run_output(rec, model, x0, options.output, options.ner, options.threads, -1, &x);
  return rec;
}

RunRecord run_random_search(const ProblemModel& model, const FeasibleBox& box,
                            long draws_per_eval, const BaselineOptions& options) {
  check_common(box, model, options, "run_random_search");
  if (draws_per_eval < 1)
    throw std::invalid_argument("run_random_search: draws_per_eval must be >= 1");

  RunRecord rec;
  rec.method = "random-search";
  const auto t0 = Clock::now();
  const Vec center(box.dim(), 0.5 * (box.lo() + box.hi()));

  double best = std::numeric_limits<double>::infinity();
  for (long t = 1; keep_going(t, options.stop, t0); ++t) {
    RngStream point_rng = options.sampling.stream(static_cast<std::uint64_t>(t), 0);
    Vec cand(box.dim());
    for (double& c : cand) c = point_rng.next_uniform(box.lo(), box.hi());

    double f_sum = 0.0;
    for (long ell = 0; ell < draws_per_eval; ++ell) {
      RngStream rng = options.sampling.stream(static_cast<std::uint64_t>(t),
                                              static_cast<std::uint64_t>(1 + ell));
      f_sum += model.objective(cand, model.sample_one(cand, rng));
    }
    const double estimate = f_sum / static_cast<double>(draws_per_eval);

    IterationRow row;
    row.k = t;
    row.x_md = cand;
    row.batch_mean_f = estimate;
    row.elapsed_seconds = seconds_since(t0);
    rec.trace.push_back(std::move(row));

    if (estimate < best) {
      best = estimate;
      rec.output_x = cand;
      rec.output_k = t;
    }
  }

  rec.iterations = static_cast<long>(rec.trace.size());
  rec.wall_seconds = seconds_since(t0);
  if (rec.trace.empty()) {
    rec.output_x = center;
    rec.output_k = 0;
    rec.output_rule = "initial";
  } else {
    rec.output_ner = best;
    rec.output_rule = "best_estimate";
  }
  return rec;
}

}  // namespace ddprice
