#pragma once

#include <functional>
#include <string>

#include "ddprice/rng.hpp"

namespace ddprice {

/// Per-iteration step-size and batch-size rules, indexed from k = 1.
struct StepSchedule {
  std::function<double(long)> alpha;   ///< momentum mix, nominally in (0, 1]
  std::function<double(long)> beta;    ///< aggregated-point step, > 0
  std::function<double(long)> lambda;  ///< iterate step, > 0
  std::function<double(long)> zeta;    ///< baseline tracker step, in (0, 1]
  std::function<long(long)> batch;     ///< minibatch size m_k, >= 1
  std::string tag;                     ///< provenance label for reports
};

/// Convergence-guarantee schedule for the general estimator:
///   L_Ef = L_f + f_max M,        sigma^2 = (L_f + 2 f_max M)^2,
///   alpha_k = 2/(k+1),  beta_k = 1/(2 L_Ef),  lambda_k = k beta_k / 2,
///   m_k = ceil(sigma^2 k / (L_Ef D_tilde^2)),  zeta_k = 1/k.
StepSchedule theoretical_schedule(double lipschitz_f, double f_max, double score_bound,
                                  double d_tilde);

/// Same rules with the specialized estimator's variance ceiling
/// sigma^2 = 4 (c_max M)^2 driving the batch size.
StepSchedule theoretical_schedule_specialized(double lipschitz_f, double f_max,
                                              double score_bound, double c_max, double d_tilde);

/// Benchmark schedule used by the pricing experiments (m = buyer count):
///   alpha_k = 10/(k+1), beta_k = 0.1/(2m), lambda_k = k beta_k / 2,
///   m_k = max(1, ceil(0.1 k m)), zeta_k = 1/k.
/// Note alpha_k > 1 for k <= 9; the optimizer flags this in its run record.
StepSchedule experiment_schedule(long m);

/// Draws the output index R in {1..N} with
///   Pr[R = k]  proportional to  Gamma_k^{-1} beta_k (1 - L_Ef beta_k),
/// where Gamma_1 = 1 and Gamma_k = (1 - alpha_k) Gamma_{k-1}.  Throws
/// std::invalid_argument if the weights are degenerate (all zero or any
/// negative, e.g. beta_k >= 1/L_Ef) or if alpha_k for k >= 2 leaves (0, 1).
long sample_output_index(long n_iters, const StepSchedule& schedule, double l_ef,
                         RngStream& rng);

}  // namespace ddprice
