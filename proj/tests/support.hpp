#pragma once

#include <cmath>

#include "ddprice/models/multiproduct.hpp"
#include "ddprice/oracle.hpp"

// Shared fixtures for the test suites.
namespace ddtest {

using namespace ddprice;

/// Canonical small instance: 2 products, 3 buyers, 10 support points.
inline MultiproductSpec tiny_spec() {
  MultiproductSpec s;
  s.n = 2;
  s.m = 3;
  s.alpha = {1.0, 2.0};
  s.gamma = {1.0, 0.5};
  s.a0 = 0.5;
  s.eta1 = {0.30, 0.20};
  s.eta2 = {0.15, 0.10};
  s.eta3 = {0.45, 0.30};
  s.cost_l = {1.0, 1.0};
  s.cost_u = {2.0, 2.0};
  s.x_min = 0.01;
  s.x_max = 4.0;
  return s;
}

/// Same instance with all cost slopes zero (c == 0).
inline MultiproductSpec tiny_spec_zero_cost() {
  MultiproductSpec s = tiny_spec();
  s.eta1 = s.eta2 = s.eta3 = {0.0, 0.0};
  return s;
}

/// Deterministic strongly convex model: f(x, xi) = 0.5 ||x - t||^2 with a
/// point-mass demand distribution (score identically zero).
class QuadraticModel final : public ProblemModel {
 public:
  QuadraticModel(Vec target, FeasibleBox box) : t_(std::move(target)), box_(std::move(box)) {
    // Gradient norm and objective peak over the box occur at corners.
    double worst = 0.0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << t_.size()); ++mask) {
      double d2 = 0.0;
      for (std::size_t i = 0; i < t_.size(); ++i) {
        const double c = (mask >> i) & 1 ? box_.hi() : box_.lo();
        d2 += (c - t_[i]) * (c - t_[i]);
      }
      worst = std::max(worst, d2);
    }
    lipschitz_ = std::sqrt(worst);
    f_max_ = 0.5 * worst;
  }

  std::size_t dim() const override { return t_.size(); }
  const FeasibleBox& box() const override { return box_; }
  double objective(const Vec& x, const Vec&) const override {
    double d2 = 0.0;
    for (std::size_t i = 0; i < t_.size(); ++i) d2 += (x[i] - t_[i]) * (x[i] - t_[i]);
    return 0.5 * d2;
  }
  Vec objective_grad_x(const Vec& x, const Vec&) const override { return sub(x, t_); }
  Vec sample_one(const Vec&, RngStream&) const override { return Vec{0.0}; }
  Vec score(const Vec&, const Vec&) const override { return Vec(t_.size(), 0.0); }
  double log_prob(const Vec&, const Vec&) const override { return 0.0; }
  double f_max_bound() const override { return f_max_; }
  double lipschitz_f() const override { return lipschitz_; }
  double score_bound() const override { return 0.0; }
  std::string name() const override { return "quadratic"; }

  const Vec& target() const { return t_; }

 private:
  Vec t_;
  FeasibleBox box_;
  double lipschitz_ = 0.0;
  double f_max_ = 0.0;
};

inline Vec random_feasible(const FeasibleBox& box, RngStream& rng) {
  Vec x(box.dim());
  for (double& v : x) v = rng.next_uniform(box.lo(), box.hi());
  return x;
}

}  // namespace ddtest
