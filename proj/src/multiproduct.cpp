#include "ddprice/models/multiproduct.hpp"

#include <algorithm>
#include <cmath>

namespace ddprice {

double piecewise_cost(double q, double eta1, double eta2, double eta3, double l, double u) {
  const double seg1 = std::min(q, l);
  const double seg2 = std::clamp(q - l, 0.0, u - l);
  const double seg3 = std::max(q - u, 0.0);
  return eta1 * seg1 + eta2 * seg2 + eta3 * seg3;
}

void MultiproductSpec::validate() const {
  if (n == 0) throw std::invalid_argument("MultiproductSpec: n must be >= 1");
  if (m < 0) throw std::invalid_argument("MultiproductSpec: m must be >= 0");
  if (!(a0 > 0.0)) throw std::invalid_argument("MultiproductSpec: a0 must be positive");
  if (!(x_min < x_max)) throw std::invalid_argument("MultiproductSpec: require x_min < x_max");
  auto check_size = [&](const Vec& v, const char* what) {
    if (v.size() != n)
      throw std::invalid_argument(std::string("MultiproductSpec: ") + what + " must have size n");
  };
  check_size(alpha, "alpha");
  check_size(gamma, "gamma");
  check_size(eta1, "eta1");
  check_size(eta2, "eta2");
  check_size(eta3, "eta3");
  check_size(cost_l, "cost_l");
  check_size(cost_u, "cost_u");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(gamma[i] > 0.0)) throw std::invalid_argument("MultiproductSpec: gamma must be positive");
    if (!std::isfinite(alpha[i]))
      throw std::invalid_argument("MultiproductSpec: alpha must be finite");
    if (!(cost_l[i] >= 0.0 && cost_u[i] >= cost_l[i]))
      throw std::invalid_argument("MultiproductSpec: require 0 <= cost_l <= cost_u");
  }
}

Vec mnl_probs(const Vec& x, const MultiproductSpec& spec) {
  require_dim(x, spec.n, "mnl_probs");
  Vec util(spec.n);
  double peak = 0.0;  // exponent of the a0 term is 0
  for (std::size_t i = 0; i < spec.n; ++i) {
    util[i] = spec.gamma[i] * (spec.alpha[i] - x[i]);
    peak = std::max(peak, util[i]);
  }
  Vec p(spec.n + 1);
  double denom = spec.a0 * std::exp(-peak);
  for (std::size_t i = 0; i < spec.n; ++i) {
    p[i + 1] = std::exp(util[i] - peak);
    denom += p[i + 1];
  }
  p[0] = spec.a0 * std::exp(-peak) / denom;
  for (std::size_t i = 1; i <= spec.n; ++i) p[i] /= denom;
  return p;
}

Vec mnl_score(const Vec& x, const Vec& xi, const MultiproductSpec& spec) {
  const Vec p = mnl_probs(x, spec);
  require_dim(xi, spec.n + 1, "mnl_score: xi");
  Vec s(spec.n);
  const double m = static_cast<double>(spec.m);
  for (std::size_t k = 0; k < spec.n; ++k) s[k] = spec.gamma[k] * (m * p[k + 1] - xi[k + 1]);
  return s;
}

Vec mnl_score_expanded(const Vec& x, const Vec& xi, const MultiproductSpec& spec) {
  const Vec p = mnl_probs(x, spec);
  require_dim(xi, spec.n + 1, "mnl_score_expanded: xi");
  Vec s(spec.n, 0.0);
  for (std::size_t k = 0; k < spec.n; ++k) {
    double acc = 0.0;
    for (std::size_t j = 0; j <= spec.n; ++j) {
      if (j == k + 1) continue;
      acc += xi[j] * spec.gamma[k] * p[k + 1];
    }
    acc -= xi[k + 1] * spec.gamma[k] * (1.0 - p[k + 1]);
    s[k] = acc;
  }
  return s;
}

MultiproductModel::MultiproductModel(MultiproductSpec spec)
    : spec_(std::move(spec)), box_(1.0, 2.0, 1) {
  spec_.validate();
  box_ = FeasibleBox(spec_.x_min, spec_.x_max, spec_.n);
  // Piecewise-linear costs attain extrema at breakpoints or range ends.
  cost_max_sum_ = 0.0;
  const double m = static_cast<double>(spec_.m);
  for (std::size_t i = 0; i < spec_.n; ++i) {
    double worst = 0.0;
    for (double q : {0.0, spec_.cost_l[i], spec_.cost_u[i], m}) {
      q = std::clamp(q, 0.0, m);
      worst = std::max(worst, std::fabs(piecewise_cost(q, spec_.eta1[i], spec_.eta2[i],
                                                       spec_.eta3[i], spec_.cost_l[i],
                                                       spec_.cost_u[i])));
    }
    cost_max_sum_ += worst;
  }
}

void MultiproductModel::check_sample(const Vec& xi) const {
  require_dim(xi, spec_.n + 1, "multiproduct demand sample");
  double total = 0.0;
  for (double v : xi) {
    if (!(v >= 0.0) || v != std::floor(v))
      throw std::invalid_argument("multiproduct demand sample: counts must be nonnegative integers");
    total += v;
  }
  if (total != static_cast<double>(spec_.m))
    throw std::invalid_argument("multiproduct demand sample: counts must sum to m");
}

double MultiproductModel::objective(const Vec& x, const Vec& xi) const {
  require_dim(x, spec_.n, "multiproduct objective");
  check_sample(xi);
  double sales = 0.0;
  for (std::size_t i = 0; i < spec_.n; ++i) sales += x[i] * xi[i + 1];
  return -sales + cost(xi);
}

Vec MultiproductModel::objective_grad_x(const Vec& x, const Vec& xi) const {
  require_dim(x, spec_.n, "multiproduct objective_grad_x");
  check_sample(xi);
  Vec g(spec_.n);
  for (std::size_t i = 0; i < spec_.n; ++i) g[i] = -xi[i + 1];
  return g;
}

Vec MultiproductModel::sample_one(const Vec& x, RngStream& rng) const {
  const Vec p = mnl_probs(x, spec_);
  Vec cdf(p.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    cdf[i] = acc;
  }
  cdf.back() = 1.0;
  Vec xi(spec_.n + 1, 0.0);
  for (long b = 0; b < spec_.m; ++b) {
    const double u = rng.next_double();
    const std::size_t slot =
        std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
    xi[std::min(slot, spec_.n)] += 1.0;
  }
  return xi;
}

Vec MultiproductModel::score(const Vec& x, const Vec& xi) const {
  check_sample(xi);
  return mnl_score(x, xi, spec_);
}

double MultiproductModel::log_prob(const Vec& x, const Vec& xi) const {
  check_sample(xi);
  const Vec p = mnl_probs(x, spec_);
  double lp = std::lgamma(static_cast<double>(spec_.m) + 1.0);
  for (std::size_t j = 0; j <= spec_.n; ++j) {
    lp -= std::lgamma(xi[j] + 1.0);
    if (xi[j] > 0.0) lp += xi[j] * std::log(p[j]);
  }
  return lp;
}

double MultiproductModel::f_max_bound() const {
  return static_cast<double>(spec_.n) * static_cast<double>(spec_.m) *
             std::max(std::fabs(spec_.x_min), std::fabs(spec_.x_max)) +
         cost_max_sum_;
}

double MultiproductModel::lipschitz_f() const { return static_cast<double>(spec_.m); }

double MultiproductModel::score_bound() const {
  double gmax = 0.0;
  for (double g : spec_.gamma) gmax = std::max(gmax, g);
  return static_cast<double>(spec_.n) * static_cast<double>(spec_.m) * gmax;
}

Vec MultiproductModel::mean_demand(const Vec& x) const {
  Vec p = mnl_probs(x, spec_);
  for (double& v : p) v *= static_cast<double>(spec_.m);
  return p;
}

Vec MultiproductModel::sales_grad_at_mean(const Vec& x) const {
  const Vec p = mnl_probs(x, spec_);
  const double m = static_cast<double>(spec_.m);
  double xp = 0.0;  // sum_i x_i p_i over products
  for (std::size_t i = 0; i < spec_.n; ++i) xp += x[i] * p[i + 1];
  Vec g(spec_.n);
  for (std::size_t k = 0; k < spec_.n; ++k)
    g[k] = m * p[k + 1] + m * spec_.gamma[k] * p[k + 1] * (xp - x[k]);
  return g;
}

double MultiproductModel::objective_at_mean(const Vec& x) const {
  const Vec mean = mean_demand(x);
  double sales = 0.0;
  double c = 0.0;
  for (std::size_t i = 0; i < spec_.n; ++i) {
    sales += x[i] * mean[i + 1];
    c += piecewise_cost(mean[i + 1], spec_.eta1[i], spec_.eta2[i], spec_.eta3[i], spec_.cost_l[i],
                        spec_.cost_u[i]);
  }
  return -sales + c;
}

double MultiproductModel::cost(const Vec& xi) const {
  check_sample(xi);
  double c = 0.0;
  for (std::size_t i = 0; i < spec_.n; ++i)
    c += piecewise_cost(xi[i + 1], spec_.eta1[i], spec_.eta2[i], spec_.eta3[i], spec_.cost_l[i],
                        spec_.cost_u[i]);
  return c;
}

Matrix MultiproductModel::action_prob_jacobian(const Vec& x) const {
  const Vec p = mnl_probs(x, spec_);
  Matrix jac(spec_.n, spec_.n + 1);
  for (std::size_t k = 0; k < spec_.n; ++k) {
    const double gk = spec_.gamma[k];
    const double pk = p[k + 1];
    for (std::size_t j = 0; j <= spec_.n; ++j)
      jac(k, j) = (j == k + 1) ? -gk * pk * (1.0 - pk) : gk * p[j] * pk;
  }
  return jac;
}

Vec MultiproductModel::phi_score(const Vec& x, const Vec& xi) const {
  check_sample(xi);
  const Vec p = mnl_probs(x, spec_);
  Vec s(spec_.n + 1);
  for (std::size_t j = 0; j <= spec_.n; ++j) s[j] = (xi[j] == 0.0) ? 0.0 : xi[j] / p[j];
  return s;
}

double MultiproductModel::c_max_bound() const { return cost_max_sum_; }

double MultiproductModel::outcome_count() const {
  // Compositions of m into n+1 slots: C(m + n, n).
  double count = 1.0;
  for (std::size_t i = 1; i <= spec_.n; ++i)
    count *= (static_cast<double>(spec_.m) + i) / static_cast<double>(i);
  return std::round(count);
}

void MultiproductModel::for_each_outcome(
    const Vec& x, const std::function<void(const Vec&, double)>& visit) const {
  const Vec p = mnl_probs(x, spec_);
  Vec logp(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) logp[j] = std::log(p[j]);
  Vec xi(spec_.n + 1, 0.0);
  const double log_m_fact = std::lgamma(static_cast<double>(spec_.m) + 1.0);
  // Avoids 0 * log(0) when a probability underflows.
  auto slot_term = [&](std::size_t slot, double count) {
    return (count > 0.0 ? count * logp[slot] : 0.0) - std::lgamma(count + 1.0);
  };

  // Depth-first over slots 0..n-1; the final slot takes the remainder.
  std::function<void(std::size_t, long, double)> walk = [&](std::size_t slot, long left,
                                                            double partial_lp) {
    if (slot + 1 == xi.size()) {
      xi[slot] = static_cast<double>(left);
      visit(xi, std::exp(log_m_fact + partial_lp + slot_term(slot, xi[slot])));
      return;
    }
    for (long c = 0; c <= left; ++c) {
      xi[slot] = static_cast<double>(c);
      walk(slot + 1, left - c, partial_lp + slot_term(slot, xi[slot]));
    }
  };
  walk(0, spec_.m, 0.0);
}

}  // namespace ddprice
