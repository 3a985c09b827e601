#pragma once

#include <functional>
#include <limits>

#include "ddprice/model.hpp"

namespace ddprice {

/// Tolled-lane pricing instance: on interval i, each of d_i drivers opts into
/// the toll lane independently with logistic probability
///   p_i(x_i) = 1 / (1 + exp(alpha_i h_i + beta_i x_i + gamma_i)),
/// so demand is a vector of independent binomial counts.  The planner pays
///   f(x, xi) = -[ sum_i (q_hot(xi_i) + q_reg(d_i - xi_i))
///                 + theta * min(k_critical - avg_i k(xi_i), 0) ],
/// i.e. minimizing f maximizes flow welfare with a congestion penalty.
struct HotLaneSpec {
  std::vector<long> d;  ///< drivers per interval
  Vec alpha, beta, gamma, h;  ///< logistic coefficients per interval
  double theta = 0.0;         ///< congestion penalty weight (>= 0)
  double k_critical = 0.0;    ///< critical density threshold
  double x_min = 0.0;
  double x_max = 1.0;

  // Flow/density maps default to the illustrative family
  //   q(xi) = min(flow_rate * xi, flow_cap),  k(xi) = xi / lane_length;
  // the std::function overrides take precedence when set (programmatic use
  // only; the plain-text serialization covers the default family).
  double flow_rate = 1.0;
  double flow_cap = std::numeric_limits<double>::infinity();
  double lane_length = 1.0;
  std::function<double(double)> q_hot_override;
  std::function<double(double)> q_reg_override;
  std::function<double(double)> density_override;

  void validate() const;
};

class HotLaneModel final : public FiniteSupportModel {
 public:
  explicit HotLaneModel(HotLaneSpec spec);

  const HotLaneSpec& spec() const { return spec_; }

  /// Toll-lane probability for interval i at price x_i.
  double opt_in_prob(std::size_t i, double x_i) const;
  double q_hot(double flow) const;
  double q_reg(double flow) const;
  double density(double flow) const;
  /// The bracketed welfare term; f = -welfare.
  double welfare(const Vec& xi) const;

  std::size_t dim() const override { return spec_.d.size(); }
  const FeasibleBox& box() const override { return box_; }
  double objective(const Vec& x, const Vec& xi) const override;
  Vec objective_grad_x(const Vec& x, const Vec& xi) const override;
  Vec sample_one(const Vec& x, RngStream& rng) const override;
  Vec score(const Vec& x, const Vec& xi) const override;
  double log_prob(const Vec& x, const Vec& xi) const override;
  double f_max_bound() const override { return f_max_; }
  double lipschitz_f() const override { return 0.0; }  // sales part is absent
  double score_bound() const override;
  std::string name() const override { return "hotlane"; }

  Vec mean_demand(const Vec& x) const override;
  Vec sales_grad_at_mean(const Vec& x) const override;
  double cost(const Vec& xi) const override;
  double objective_at_mean(const Vec& x) const override;
  Matrix action_prob_jacobian(const Vec& x) const override;
  Vec phi_score(const Vec& x, const Vec& xi) const override;
  std::size_t action_count() const override { return spec_.d.size(); }
  double c_max_bound() const override { return f_max_; }

  double outcome_count() const override;
  void for_each_outcome(const Vec& x,
                        const std::function<void(const Vec&, double)>& visit) const override;

 private:
  void check_sample(const Vec& xi) const;

  HotLaneSpec spec_;
  FeasibleBox box_;
  double f_max_ = 0.0;
};

}  // namespace ddprice
