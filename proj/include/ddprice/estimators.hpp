#pragma once

#include <cstdint>

#include "ddprice/model.hpp"

namespace ddprice {

/// Result of a minibatch gradient evaluation.
struct GradientEstimate {
  Vec g;                    ///< averaged gradient estimate
  double batch_mean_f = 0;  ///< mean objective (general) or mean cost (specialized)
  long batch_size = 0;
};

/// Variance-reduction baseline delta_k tracked by online gradient descent.
struct BaselineState {
  double delta = 0.0;
  long k = 1;  ///< index of delta (delta_1 is the initial value)
};

/// Single-draw likelihood-ratio gradient
///   g = grad_x f(x, xi) + (f(x, xi) - delta) * score(x, xi),
/// unbiased for grad E_{xi ~ D(x)}[f] for any fixed delta.
Vec score_gradient(const ProblemModel& model, const Vec& x, const Vec& xi, double delta);

/// Averages `batch` single-draw gradients.  Sample ell draws from the
/// dedicated stream streams.stream(iteration, ell), so results are identical
/// for any thread count; the reduction is a fixed-shape pairwise tree over
/// fixed-size chunks.  Throws NumericError on non-finite contributions.
GradientEstimate minibatch_gradient(const ProblemModel& model, const Vec& x, double delta,
                                    long batch, const StreamFamily& streams,
                                    std::uint64_t iteration, int n_threads = 1);

/// Specialized multi-agent estimator
///   g = grad_x[-sales(x, mean_demand(x))]
///       + J(x) * avg_ell [ (c(xi_ell) - delta) * phi_score(x, xi_ell) ],
/// unbiased for grad E[f] with variance driven by the cost spread only.
/// batch_mean_f carries the batch mean of c(xi_ell), the baseline target.
GradientEstimate specialized_gradient(const MultiAgentProblemModel& model, const Vec& x,
                                      double delta, long batch, const StreamFamily& streams,
                                      std::uint64_t iteration, int n_threads = 1);

/// One step of the baseline tracker: delta_{k+1} = (1 - zeta) delta_k + zeta v_k.
/// The caller supplies zeta = zeta_{k+1}; with zeta_k = 1/k the state is the
/// running mean of (delta_1, v_1, ..., v_k).  Requires zeta in (0, 1].
BaselineState ogd_update(const BaselineState& state, double v, double zeta);

/// Monte-Carlo mean of f(x, xi) over `count` fresh draws (same deterministic
/// chunked reduction and stream layout as minibatch_gradient).
double mc_mean_objective(const ProblemModel& model, const Vec& x, long count,
                         const StreamFamily& streams, std::uint64_t iteration = 0,
                         int n_threads = 1);

}  // namespace ddprice
