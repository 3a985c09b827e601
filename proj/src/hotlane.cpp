#include "ddprice/models/hotlane.hpp"

#include <algorithm>
#include <cmath>

namespace ddprice {

namespace {

/// Numerically stable logistic 1 / (1 + e^t).
double inv_logit_neg(double t) {
  if (t >= 0.0) {
    const double e = std::exp(-t);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(t));
}

double log_binom_coeff(double d, double k) {
  return std::lgamma(d + 1.0) - std::lgamma(k + 1.0) - std::lgamma(d - k + 1.0);
}

}  // namespace

void HotLaneSpec::validate() const {
  const std::size_t n = d.size();
  if (n == 0) throw std::invalid_argument("HotLaneSpec: need at least one interval");
  auto check_size = [&](const Vec& v, const char* what) {
    if (v.size() != n)
      throw std::invalid_argument(std::string("HotLaneSpec: ") + what +
                                  " must have one entry per interval");
  };
  check_size(alpha, "alpha");
  check_size(beta, "beta");
  check_size(gamma, "gamma");
  check_size(h, "h");
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i] < 0) throw std::invalid_argument("HotLaneSpec: driver counts must be >= 0");
    if (!std::isfinite(alpha[i]) || !std::isfinite(beta[i]) || !std::isfinite(gamma[i]) ||
        !std::isfinite(h[i]))
      throw std::invalid_argument("HotLaneSpec: logistic coefficients must be finite");
  }
  if (!(theta >= 0.0)) throw std::invalid_argument("HotLaneSpec: theta must be >= 0");
  if (!(x_min < x_max)) throw std::invalid_argument("HotLaneSpec: require x_min < x_max");
  if (!(flow_rate >= 0.0) || !(flow_cap > 0.0))
    throw std::invalid_argument("HotLaneSpec: flow family parameters must be positive");
  if (!(lane_length > 0.0))
    throw std::invalid_argument("HotLaneSpec: lane_length must be positive");
}

HotLaneModel::HotLaneModel(HotLaneSpec spec) : spec_(std::move(spec)), box_(0.0, 1.0, 1) {
  spec_.validate();
  box_ = FeasibleBox(spec_.x_min, spec_.x_max, spec_.d.size());

  // |welfare| <= sum_i max_{xi_i} |q_hot + q_reg|  +  theta * max(0, avg max k - k_c);
  // each term is enumerated over its own interval, so this is a valid bound
  // for arbitrary user-supplied flow maps.
  double flow_total = 0.0;
  double density_peak_avg = 0.0;
  for (std::size_t i = 0; i < spec_.d.size(); ++i) {
    double worst_flow = 0.0;
    double worst_density = -std::numeric_limits<double>::infinity();
    for (long xi = 0; xi <= spec_.d[i]; ++xi) {
      const double flow = q_hot(static_cast<double>(xi)) +
                          q_reg(static_cast<double>(spec_.d[i] - xi));
      worst_flow = std::max(worst_flow, std::fabs(flow));
      worst_density = std::max(worst_density, density(static_cast<double>(xi)));
    }
    flow_total += worst_flow;
    density_peak_avg += worst_density;
  }
  density_peak_avg /= static_cast<double>(spec_.d.size());
  f_max_ = flow_total + spec_.theta * std::max(0.0, density_peak_avg - spec_.k_critical);
}

double HotLaneModel::opt_in_prob(std::size_t i, double x_i) const {
  return inv_logit_neg(spec_.alpha[i] * spec_.h[i] + spec_.beta[i] * x_i + spec_.gamma[i]);
}

double HotLaneModel::q_hot(double flow) const {
  if (spec_.q_hot_override) return spec_.q_hot_override(flow);
  return std::min(spec_.flow_rate * flow, spec_.flow_cap);
}

double HotLaneModel::q_reg(double flow) const {
  if (spec_.q_reg_override) return spec_.q_reg_override(flow);
  return std::min(spec_.flow_rate * flow, spec_.flow_cap);
}

double HotLaneModel::density(double flow) const {
  if (spec_.density_override) return spec_.density_override(flow);
  return flow / spec_.lane_length;
}

double HotLaneModel::welfare(const Vec& xi) const {
  double flow = 0.0;
  double dens = 0.0;
  for (std::size_t i = 0; i < spec_.d.size(); ++i) {
    flow += q_hot(xi[i]) + q_reg(static_cast<double>(spec_.d[i]) - xi[i]);
    dens += density(xi[i]);
  }
  dens /= static_cast<double>(spec_.d.size());
  return flow + spec_.theta * std::min(spec_.k_critical - dens, 0.0);
}

void HotLaneModel::check_sample(const Vec& xi) const {
  require_dim(xi, spec_.d.size(), "hotlane demand sample");
  for (std::size_t i = 0; i < xi.size(); ++i) {
    if (!(xi[i] >= 0.0) || xi[i] != std::floor(xi[i]) ||
        xi[i] > static_cast<double>(spec_.d[i]))
      throw std::invalid_argument(
          "hotlane demand sample: counts must be integers in [0, d_i]");
  }
}

double HotLaneModel::objective(const Vec& x, const Vec& xi) const {
  require_dim(x, dim(), "hotlane objective");
  check_sample(xi);
  return -welfare(xi);
}

Vec HotLaneModel::objective_grad_x(const Vec& x, const Vec& xi) const {
  require_dim(x, dim(), "hotlane objective_grad_x");
  check_sample(xi);
  return Vec(dim(), 0.0);  // the objective has no direct x dependence
}

Vec HotLaneModel::sample_one(const Vec& x, RngStream& rng) const {
  require_dim(x, dim(), "hotlane sample");
  Vec xi(dim(), 0.0);
  for (std::size_t i = 0; i < dim(); ++i) {
    const double p = opt_in_prob(i, x[i]);
    long count = 0;
    for (long b = 0; b < spec_.d[i]; ++b)
      if (rng.next_double() < p) ++count;
    xi[i] = static_cast<double>(count);
  }
  return xi;
}

Vec HotLaneModel::score(const Vec& x, const Vec& xi) const {
  require_dim(x, dim(), "hotlane score");
  check_sample(xi);
  Vec s(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    const double p = opt_in_prob(i, x[i]);
    s[i] = spec_.beta[i] * (static_cast<double>(spec_.d[i]) * p - xi[i]);
  }
  return s;
}

double HotLaneModel::log_prob(const Vec& x, const Vec& xi) const {
  require_dim(x, dim(), "hotlane log_prob");
  check_sample(xi);
  double lp = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) {
    const double p = opt_in_prob(i, x[i]);
    const double di = static_cast<double>(spec_.d[i]);
    lp += log_binom_coeff(di, xi[i]);
    if (xi[i] > 0.0) lp += xi[i] * std::log(p);
    if (xi[i] < di) lp += (di - xi[i]) * std::log1p(-p);
  }
  return lp;
}

double HotLaneModel::score_bound() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < dim(); ++i)
    worst = std::max(worst, std::fabs(spec_.beta[i]) * static_cast<double>(spec_.d[i]));
  return static_cast<double>(dim()) * worst;
}

Vec HotLaneModel::mean_demand(const Vec& x) const {
  require_dim(x, dim(), "hotlane mean_demand");
  Vec mu(dim());
  for (std::size_t i = 0; i < dim(); ++i)
    mu[i] = static_cast<double>(spec_.d[i]) * opt_in_prob(i, x[i]);
  return mu;
}

Vec HotLaneModel::sales_grad_at_mean(const Vec& x) const {
  require_dim(x, dim(), "hotlane sales_grad_at_mean");
  return Vec(dim(), 0.0);  // no sales term
}

double HotLaneModel::cost(const Vec& xi) const {
  check_sample(xi);
  return -welfare(xi);
}

double HotLaneModel::objective_at_mean(const Vec& x) const { return -welfare(mean_demand(x)); }

Matrix HotLaneModel::action_prob_jacobian(const Vec& x) const {
  require_dim(x, dim(), "hotlane action_prob_jacobian");
  Matrix jac(dim(), dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    const double p = opt_in_prob(i, x[i]);
    jac(i, i) = -spec_.beta[i] * p * (1.0 - p);
  }
  return jac;
}

Vec HotLaneModel::phi_score(const Vec& x, const Vec& xi) const {
  require_dim(x, dim(), "hotlane phi_score");
  check_sample(xi);
  Vec s(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    const double p = opt_in_prob(i, x[i]);
    const double di = static_cast<double>(spec_.d[i]);
    const double lhs = (xi[i] > 0.0) ? xi[i] / p : 0.0;
    const double rhs = (xi[i] < di) ? (di - xi[i]) / (1.0 - p) : 0.0;
    s[i] = lhs - rhs;
  }
  return s;
}

double HotLaneModel::outcome_count() const {
  double count = 1.0;
  for (long di : spec_.d) count *= static_cast<double>(di + 1);
  return count;
}

void HotLaneModel::for_each_outcome(
    const Vec& x, const std::function<void(const Vec&, double)>& visit) const {
  require_dim(x, dim(), "hotlane for_each_outcome");
  Vec p(dim());
  for (std::size_t i = 0; i < dim(); ++i) p[i] = opt_in_prob(i, x[i]);

  Vec xi(dim(), 0.0);
  std::function<void(std::size_t, double)> walk = [&](std::size_t i, double prob) {
    if (i == dim()) {
      visit(xi, prob);
      return;
    }
    const double di = static_cast<double>(spec_.d[i]);
    for (long c = 0; c <= spec_.d[i]; ++c) {
      const double cd = static_cast<double>(c);
      xi[i] = cd;
      double lp = log_binom_coeff(di, cd);
      if (cd > 0.0) lp += cd * std::log(p[i]);
      if (cd < di) lp += (di - cd) * std::log1p(-p[i]);
      walk(i + 1, prob * std::exp(lp));
    }
  };
  walk(0, 1.0);
}

}  // namespace ddprice
