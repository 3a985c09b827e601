#pragma once

#include "ddprice/model.hpp"

namespace ddprice {

/// Continuous piecewise-linear cost with slopes eta1 (q <= l), eta2
/// (l < q <= u) and eta3 (q > u); c(0) = 0.
double piecewise_cost(double q, double eta1, double eta2, double eta3, double l, double u);

/// Multiproduct pricing instance: m buyers choose independently among n
/// products (or the no-buy option, slot 0) with logit probabilities
///   p_i(x) = exp(gamma_i (alpha_i - x_i)) / (a0 + sum_j exp(gamma_j (alpha_j - x_j))).
/// Demand is the multinomial count vector over slots 0..n.
struct MultiproductSpec {
  std::size_t n = 0;  ///< number of products
  long m = 0;         ///< number of buyers
  Vec alpha;          ///< reference prices, size n
  Vec gamma;          ///< price sensitivities (> 0), size n
  double a0 = 1.0;    ///< no-buy weight (> 0)
  Vec eta1, eta2, eta3;  ///< cost slopes per product, size n
  Vec cost_l, cost_u;    ///< cost breakpoints per product (0 <= l <= u), size n
  double x_min = 0.0;
  double x_max = 1.0;

  /// Throws std::invalid_argument on inconsistent sizes or signs.
  void validate() const;
};

/// Choice probabilities (p_0, p_1, ..., p_n); overflow-safe, sums to 1.
Vec mnl_probs(const Vec& x, const MultiproductSpec& spec);

/// Score grad_x log Pr(xi | x); component k is gamma_k (m p_k(x) - xi_k).
Vec mnl_score(const Vec& x, const Vec& xi, const MultiproductSpec& spec);

/// Same score written as the per-slot sum
///   sum_{j != k} xi_j gamma_k p_k - xi_k gamma_k (1 - p_k);
/// retained as an independent cross-check of the collapsed form.
Vec mnl_score_expanded(const Vec& x, const Vec& xi, const MultiproductSpec& spec);

class MultiproductModel final : public FiniteSupportModel {
 public:
  explicit MultiproductModel(MultiproductSpec spec);

  const MultiproductSpec& spec() const { return spec_; }

  std::size_t dim() const override { return spec_.n; }
  const FeasibleBox& box() const override { return box_; }
  double objective(const Vec& x, const Vec& xi) const override;
  Vec objective_grad_x(const Vec& x, const Vec& xi) const override;
  Vec sample_one(const Vec& x, RngStream& rng) const override;
  Vec score(const Vec& x, const Vec& xi) const override;
  double log_prob(const Vec& x, const Vec& xi) const override;
  double f_max_bound() const override;
  double lipschitz_f() const override;
  double score_bound() const override;
  std::string name() const override { return "multiproduct"; }

  Vec mean_demand(const Vec& x) const override;
  Vec sales_grad_at_mean(const Vec& x) const override;
  double cost(const Vec& xi) const override;
  double objective_at_mean(const Vec& x) const override;
  Matrix action_prob_jacobian(const Vec& x) const override;
  Vec phi_score(const Vec& x, const Vec& xi) const override;
  std::size_t action_count() const override { return spec_.n + 1; }
  double c_max_bound() const override;

  double outcome_count() const override;
  void for_each_outcome(const Vec& x,
                        const std::function<void(const Vec&, double)>& visit) const override;

 private:
  /// Validates that xi is a vector of n+1 nonnegative integer counts
  /// summing to m.
  void check_sample(const Vec& xi) const;

  MultiproductSpec spec_;
  FeasibleBox box_;
  double cost_max_sum_;  // sum_i max_q |c_i(q)|
};

}  // namespace ddprice
