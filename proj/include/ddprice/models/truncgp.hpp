#pragma once

#include "ddprice/model.hpp"

namespace ddprice {

/// Gaussian-process posterior weights for one item: mean mu(x) = v(x)' a and
/// variance sigma^2 - v(x)' A v(x), where v_j(x) = theta1 exp(-||x - xhat_j||^2 / theta2).
struct GpPosterior {
  Vec a;     ///< (K + noise I)^{-1} targets
  Matrix A;  ///< (K + noise I)^{-1}
};

/// Fits the posterior from training inputs and per-item demand targets with
/// Gram entries theta1 exp(-||xhat_j - xhat_l||^2 / theta2).  Throws
/// NumericError if the regularized Gram matrix is not positive definite.
GpPosterior gp_fit(const std::vector<Vec>& train_x, const Vec& targets, double theta1,
                   double theta2, double noise);

struct TruncGpItem {
  double theta1 = 1.0;  ///< kernel scale (> 0)
  double theta2 = 1.0;  ///< kernel bandwidth (> 0)
  double sigma = 1.0;   ///< prior scale (> 0)
  double xi_max = 1.0;  ///< demand truncated to [0, xi_max]
  Vec a;                ///< posterior vector, length N
  Matrix A;             ///< posterior matrix, N x N
  double eta1 = 0.0, eta2 = 0.0, eta3 = 0.0;  ///< cost slopes
  double cost_l = 0.0, cost_u = 0.0;          ///< cost breakpoints
};

/// Demand model with one truncated-normal coordinate per item, whose mean
/// and variance come from independent GP posteriors over the price vector.
struct TruncGpSpec {
  std::vector<Vec> train_x;       ///< N shared training inputs, each of dim n
  std::vector<TruncGpItem> item;  ///< one per product; item.size() == n
  double var_floor = 1e-6;        ///< variance clamp Delta (> 0)
  double x_min = 0.0;
  double x_max = 1.0;

  void validate() const;
};

/// Per-item marginal at a price point.
struct TruncGpMarginal {
  double mu = 0.0;       ///< posterior mean
  double var = 0.0;      ///< clamped variance h_i = max(raw, Delta)
  bool clamped = false;  ///< raw variance fell below the floor
  double trunc_mass = 0.0;  ///< C_i = Phi(z_hi) - Phi(z_lo)
};

class TruncGpModel final : public ProblemModel {
 public:
  explicit TruncGpModel(TruncGpSpec spec);

  const TruncGpSpec& spec() const { return spec_; }

  /// Kernel feature vector v^i(x) for item i.
  Vec features(std::size_t i, const Vec& x) const;
  /// Marginal law of item i's demand at x.  Throws NumericError when the
  /// truncation mass C_i underflows (below 1e-300).
  TruncGpMarginal marginal(std::size_t i, const Vec& x) const;
  /// Density of item i's demand at value q (0 outside [0, xi_max]).
  double item_density(std::size_t i, const Vec& x, double q) const;
  /// CDF of item i's demand at value q.
  double item_cdf(std::size_t i, const Vec& x, double q) const;
  /// Closed-form mean of item i's truncated demand at x.
  double item_mean(std::size_t i, const Vec& x) const;
  /// E[f(x, xi)] by closed-form means and per-item cost quadrature split at
  /// the cost breakpoints; `tol` is the quadrature tolerance per segment.
  double expected_objective(const Vec& x, double tol = 1e-9) const;

  std::size_t dim() const override { return spec_.item.size(); }
  const FeasibleBox& box() const override { return box_; }
  double objective(const Vec& x, const Vec& xi) const override;
  Vec objective_grad_x(const Vec& x, const Vec& xi) const override;
  Vec sample_one(const Vec& x, RngStream& rng) const override;
  Vec score(const Vec& x, const Vec& xi) const override;
  double log_prob(const Vec& x, const Vec& xi) const override;
  double f_max_bound() const override;
  double lipschitz_f() const override;
  double score_bound() const override;
  std::string name() const override { return "truncgp"; }

  double cost(const Vec& xi) const;

 private:
  void check_sample(const Vec& xi) const;

  TruncGpSpec spec_;
  FeasibleBox box_;
};

}  // namespace ddprice
