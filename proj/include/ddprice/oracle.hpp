#pragma once

#include <functional>

#include "ddprice/estimators.hpp"
#include "ddprice/model.hpp"

namespace ddprice {

// Independent ground-truth oracles.  These deliberately avoid the sampling
// and estimator code paths: expectations come from exact support enumeration
// and gradients from finite differences, so estimator bugs cannot hide.

/// Exact expectation report for a finite-support model at x.
struct EnumerationReport {
  double expected_f = 0.0;   ///< E[f(x, xi)]
  Vec grad;                  ///< grad_x E[f] = sum Pr (grad_x f + f * score)
  double prob_mass = 0.0;    ///< sum of enumerated probabilities (~1)
  double outcomes = 0.0;     ///< number of support points visited
};

/// Enumerates the full support.  Refuses supports larger than max_outcomes
/// (throws std::invalid_argument naming the count) to avoid runaway loops.
EnumerationReport enumerate_expectation(const FiniteSupportModel& model, const Vec& x,
                                        double max_outcomes = 2e6);

/// Central finite-difference gradient of a scalar function.
Vec finite_diff_gradient(const std::function<double(const Vec&)>& f, const Vec& x,
                         double h = 1e-6);

/// Outcome of a Monte-Carlo unbiasedness audit against a known gradient.
struct UnbiasednessReport {
  Vec mc_mean;      ///< per-coordinate Monte-Carlo mean of the estimator
  Vec target;       ///< exact gradient
  Vec z_scores;     ///< (mean - target) / standard error, per coordinate
  double max_abs_z = 0.0;
  long draws = 0;
  bool pass = false;  ///< max |z| <= z_tol
};

/// Audits the single-draw likelihood-ratio estimator at (x, delta) over
/// `draws` independent draws.  Coordinates with zero empirical variance pass
/// iff the mean matches the target exactly.
UnbiasednessReport check_unbiased(const ProblemModel& model, const Vec& x, double delta,
                                  long draws, const StreamFamily& streams, const Vec& target,
                                  double z_tol = 3.0);

/// Same audit for the specialized multi-agent estimator (batch size 1 draws).
UnbiasednessReport check_unbiased_specialized(const MultiAgentProblemModel& model, const Vec& x,
                                              double delta, long draws,
                                              const StreamFamily& streams, const Vec& target,
                                              double z_tol = 3.0);

/// Empirical second moment of the estimator deviation against a ceiling.
struct VarianceReport {
  double mean_sq_dev = 0.0;  ///< empirical E ||g - target||^2
  double bound = 0.0;        ///< declared ceiling
  long draws = 0;
  bool pass = false;
};

VarianceReport check_variance_bound(const ProblemModel& model, const Vec& x, double delta,
                                    long draws, const StreamFamily& streams, const Vec& target,
                                    double bound);

VarianceReport check_variance_bound_specialized(const MultiAgentProblemModel& model, const Vec& x,
                                                double delta, long draws,
                                                const StreamFamily& streams, const Vec& target,
                                                double bound);

}  // namespace ddprice
