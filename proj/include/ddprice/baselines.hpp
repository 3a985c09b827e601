#pragma once

#include "ddprice/psg.hpp"

namespace ddprice {

/// Shared knobs for the comparison methods.  `sampling` provides the demand
/// draws (iteration 0 is reserved for non-iteration draws); `ner` is the
/// scoring family shared across methods so candidates are ranked under
/// common random numbers.
struct BaselineOptions {
  StopRule stop;
  OutputPolicy output;  ///< kRandomIndex is not supported by the baselines
  int threads = 1;
  StreamFamily sampling;
  StreamFamily ner;
};

/// SPSA gain sequences, first iteration k = 1.
double spsa_c(long k);  ///< 1 / k^0.101
double spsa_a(long k);  ///< 0.16 / (100 + k)^0.602

/// L2-regularized repeated gradient descent: each step freezes the demand
/// distribution at the current iterate, estimates g ~ mean of grad_x f(x, xi)
/// over `batch` draws xi ~ D(x), and moves
///   x <- proj(x - eta (g + alpha (x - x0))).
/// The trace records each evaluated iterate with its minibatch objective mean.
RunRecord run_l2_rgd(const ProblemModel& model, const FeasibleBox& box, const Vec& x0,
                     double alpha, double eta, long batch, const BaselineOptions& options);

/// Simultaneous-perturbation stochastic approximation with Rademacher
/// perturbations, c_k = 1/k^0.101 and a_k = 0.16/(100+k)^0.602 (k from 1),
/// one demand draw per perturbed point, estimate (f+ - f-)/(2 c_k) * Delta,
/// projection after every step.  Perturbed points are clipped into the box
/// before sampling because the demand law is only defined there.
RunRecord run_spsa(const ProblemModel& model, const FeasibleBox& box, const Vec& x0,
                   const BaselineOptions& options);

/// Projected descent on the deterministic proxy F(x) = -s(x, m(x)) + c(m(x))
/// (demand replaced by its mean).  The gradient is a central finite
/// difference with h = 1e-6; the step starts from the last accepted size
/// (initially 1.0) and shrinks by `shrink` until F strictly decreases.
/// A step below 1e-12 leaves the iterate unchanged for that iteration.
/// The trace stores F values in batch_mean_f; accepted steps make it
/// nonincreasing.
RunRecord run_psd_ad(const MultiAgentProblemModel& model, const FeasibleBox& box, const Vec& x0,
                     double shrink, const BaselineOptions& options);

/// Uniform random search over the box: candidate t is drawn from
/// sampling.stream(t, 0), scored with `draws_per_eval` Monte Carlo draws from
/// sampling.stream(t, 1 + ell), and the best estimate wins.
RunRecord run_random_search(const ProblemModel& model, const FeasibleBox& box,
                            long draws_per_eval, const BaselineOptions& options);

}  // namespace ddprice
