#pragma once

#include <functional>
#include <memory>

#include "ddprice/box.hpp"
#include "ddprice/rng.hpp"
#include "ddprice/types.hpp"

namespace ddprice {

// Stochastic program   min_{x in C}  E_{xi ~ D(x)}[ f(x, xi) ]
// where the demand distribution D(x) depends on the decision x itself.
// Models expose enough structure for likelihood-ratio gradient estimation:
// the pathwise part grad_x f and the score grad_x log Pr(xi | x).

class ProblemModel {
 public:
  virtual ~ProblemModel() = default;

  /// Decision dimension n.
  virtual std::size_t dim() const = 0;
  /// Feasible price box.
  virtual const FeasibleBox& box() const = 0;

  /// f(x, xi) = -sales(x, xi) + cost(xi).
  virtual double objective(const Vec& x, const Vec& xi) const = 0;
  /// grad_x f(x, xi) holding xi fixed.
  virtual Vec objective_grad_x(const Vec& x, const Vec& xi) const = 0;
  /// One draw from D(x).
  virtual Vec sample_one(const Vec& x, RngStream& rng) const = 0;
  /// Score grad_x log Pr(xi | x) for xi in the support of D(x).
  virtual Vec score(const Vec& x, const Vec& xi) const = 0;
  /// log Pr(xi | x) (pmf) resp. log density; evaluated exactly.
  virtual double log_prob(const Vec& x, const Vec& xi) const = 0;

  /// Declared bound with |f(x, xi)| <= f_max on C x support.
  virtual double f_max_bound() const = 0;
  /// Declared Lipschitz bound L_f >= sup ||grad_x f||.
  virtual double lipschitz_f() const = 0;
  /// Declared score bound M >= sup ||score||.
  virtual double score_bound() const = 0;

  /// Human-readable model tag for logs and CSV rows.
  virtual std::string name() const = 0;

  /// `count` draws from D(x) using one sequential stream.
  std::vector<Vec> sample(const Vec& x, RngStream& rng, std::size_t count) const;
};

/// Multi-agent refinement: demand is an aggregate of independent agents whose
/// action probabilities phi(x) are shared, sales are deterministic given mean
/// demand, and only the cost part of f is random.  Enables the specialized
/// gradient estimator.
class MultiAgentProblemModel : public ProblemModel {
 public:
  /// E_{xi ~ D(x)}[xi]; same shape as a demand sample.
  virtual Vec mean_demand(const Vec& x) const = 0;
  /// Total derivative grad_x [ sales(x, mean_demand(x)) ].
  virtual Vec sales_grad_at_mean(const Vec& x) const = 0;
  /// Cost part c(xi) of the objective (x-independent).
  virtual double cost(const Vec& xi) const = 0;
  /// Deterministic proxy objective F(x) = -sales(x, m(x)) + c(m(x)) with the
  /// random demand replaced by its mean m(x) = mean_demand(x); accepts the
  /// fractional mean even when the sampled support is integral.
  virtual double objective_at_mean(const Vec& x) const = 0;
  /// Jacobian d phi / d x, shape dim() x action_count().
  virtual Matrix action_prob_jacobian(const Vec& x) const = 0;
  /// Action-probability score d log Pr(xi | x) / d phi, so that by the chain
  /// rule score(x, xi) = action_prob_jacobian(x) * phi_score(x, xi).
  virtual Vec phi_score(const Vec& x, const Vec& xi) const = 0;
  /// Number of agent actions (columns of the Jacobian).
  virtual std::size_t action_count() const = 0;
  /// Declared bound with |c(xi)| <= c_max on the support.
  virtual double c_max_bound() const = 0;
};

/// Discrete models with (small) finite support additionally support exact
/// enumeration, which the verification oracles use.
class FiniteSupportModel : public MultiAgentProblemModel {
 public:
  /// Exact number of support points of D(x) (x-independent), as a double
  /// because counts can exceed 2^63 for large instances.
  virtual double outcome_count() const = 0;
  /// Visit every support point with its exact probability under D(x).
  virtual void for_each_outcome(const Vec& x,
                                const std::function<void(const Vec&, double)>& visit) const = 0;
};

}  // namespace ddprice
