#include "ddprice/oracle.hpp"

#include <cmath>
#include <limits>

namespace ddprice {

EnumerationReport enumerate_expectation(const FiniteSupportModel& model, const Vec& x,
                                        double max_outcomes) {
  const double count = model.outcome_count();
  if (!(count <= max_outcomes))
    throw std::invalid_argument("enumerate_expectation: support has " + std::to_string(count) +
                                " outcomes, above the cap of " + std::to_string(max_outcomes));
  EnumerationReport rep;
  rep.grad.assign(model.dim(), 0.0);
  model.for_each_outcome(x, [&](const Vec& xi, double pr) {
    const double f = model.objective(x, xi);
    const Vec gf = model.objective_grad_x(x, xi);
    const Vec sc = model.score(x, xi);
    rep.expected_f += pr * f;
    for (std::size_t d = 0; d < rep.grad.size(); ++d)
      rep.grad[d] += pr * (gf[d] + f * sc[d]);
    rep.prob_mass += pr;
    rep.outcomes += 1.0;
  });
  return rep;
}

Vec finite_diff_gradient(const std::function<double(const Vec&)>& f, const Vec& x, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite_diff_gradient: h must be positive");
  Vec g(x.size());
  Vec probe = x;
  for (std::size_t d = 0; d < x.size(); ++d) {
    const double saved = probe[d];
    probe[d] = saved + h;
    const double up = f(probe);
    probe[d] = saved - h;
    const double dn = f(probe);
    probe[d] = saved;
    g[d] = (up - dn) / (2.0 * h);
  }
  return g;
}

namespace {

UnbiasednessReport summarize_audit(const Vec& sum, const Vec& sumsq, long draws,
                                   const Vec& target, double z_tol) {
  const std::size_t n = target.size();
  UnbiasednessReport rep;
  rep.draws = draws;
  rep.target = target;
  rep.mc_mean.assign(n, 0.0);
  rep.z_scores.assign(n, 0.0);
  const double dn = static_cast<double>(draws);
  for (std::size_t d = 0; d < n; ++d) {
    const double m = sum[d] / dn;
    rep.mc_mean[d] = m;
    const double var = draws > 1 ? std::max(0.0, (sumsq[d] - dn * m * m) / (dn - 1.0)) : 0.0;
    const double se = std::sqrt(var / dn);
    double z;
    if (se > 0.0)
      z = (m - target[d]) / se;
    else
      z = (m == target[d]) ? 0.0 : std::numeric_limits<double>::infinity();
    rep.z_scores[d] = z;
    rep.max_abs_z = std::max(rep.max_abs_z, std::fabs(z));
  }
  rep.pass = rep.max_abs_z <= z_tol;
  return rep;
}

template <typename DrawGradient>
UnbiasednessReport audit_loop(std::size_t n, long draws, const Vec& target, double z_tol,
                              const DrawGradient& draw_gradient) {
  if (draws < 1) throw std::invalid_argument("unbiasedness audit: draws must be >= 1");
  Vec sum(n, 0.0), sumsq(n, 0.0);
  for (long ell = 0; ell < draws; ++ell) {
    const Vec g = draw_gradient(ell);
    for (std::size_t d = 0; d < n; ++d) {
      sum[d] += g[d];
      sumsq[d] += g[d] * g[d];
    }
  }
  return summarize_audit(sum, sumsq, draws, target, z_tol);
}

template <typename DrawGradient>
VarianceReport variance_loop(long draws, const Vec& target, double bound,
                             const DrawGradient& draw_gradient) {
  if (draws < 1) throw std::invalid_argument("variance audit: draws must be >= 1");
  double acc = 0.0;
  for (long ell = 0; ell < draws; ++ell) {
    const Vec g = draw_gradient(ell);
    double sq = 0.0;
    for (std::size_t d = 0; d < target.size(); ++d) {
      const double diff = g[d] - target[d];
      sq += diff * diff;
    }
    acc += sq;
  }
  VarianceReport rep;
  rep.mean_sq_dev = acc / static_cast<double>(draws);
  rep.bound = bound;
  rep.draws = draws;
  rep.pass = rep.mean_sq_dev <= bound;
  return rep;
}

}  // namespace

UnbiasednessReport check_unbiased(const ProblemModel& model, const Vec& x, double delta,
                                  long draws, const StreamFamily& streams, const Vec& target,
                                  double z_tol) {
  require_dim(target, model.dim(), "check_unbiased: target");
  return audit_loop(model.dim(), draws, target, z_tol, [&](long ell) {
    RngStream rng = streams.stream(0, static_cast<std::uint64_t>(ell));
    const Vec xi = model.sample_one(x, rng);
    return score_gradient(model, x, xi, delta);
  });
}

UnbiasednessReport check_unbiased_specialized(const MultiAgentProblemModel& model, const Vec& x,
                                              double delta, long draws,
                                              const StreamFamily& streams, const Vec& target,
                                              double z_tol) {
  require_dim(target, model.dim(), "check_unbiased_specialized: target");
  const Matrix jac = model.action_prob_jacobian(x);
  const Vec sales_grad = model.sales_grad_at_mean(x);
  auto one_draw = [&](long ell) {
    RngStream rng = streams.stream(0, static_cast<std::uint64_t>(ell));
    const Vec xi = model.sample_one(x, rng);
    const double w = model.cost(xi) - delta;
    Vec g = jac.apply(model.phi_score(x, xi));
    for (std::size_t d = 0; d < g.size(); ++d) g[d] = w * g[d] - sales_grad[d];
    return g;
  };
  return audit_loop(model.dim(), draws, target, z_tol, one_draw);
}

VarianceReport check_variance_bound(const ProblemModel& model, const Vec& x, double delta,
                                    long draws, const StreamFamily& streams, const Vec& target,
                                    double bound) {
  require_dim(target, model.dim(), "check_variance_bound: target");
  return variance_loop(draws, target, bound, [&](long ell) {
    RngStream rng = streams.stream(0, static_cast<std::uint64_t>(ell));
    const Vec xi = model.sample_one(x, rng);
    return score_gradient(model, x, xi, delta);
  });
}

VarianceReport check_variance_bound_specialized(const MultiAgentProblemModel& model, const Vec& x,
                                                double delta, long draws,
                                                const StreamFamily& streams, const Vec& target,
                                                double bound) {
  require_dim(target, model.dim(), "check_variance_bound_specialized: target");
  const Matrix jac = model.action_prob_jacobian(x);
  const Vec sales_grad = model.sales_grad_at_mean(x);
  return variance_loop(draws, target, bound, [&](long ell) {
    RngStream rng = streams.stream(0, static_cast<std::uint64_t>(ell));
    const Vec xi = model.sample_one(x, rng);
    const double w = model.cost(xi) - delta;
    Vec g = jac.apply(model.phi_score(x, xi));
    for (std::size_t d = 0; d < g.size(); ++d) g[d] = w * g[d] - sales_grad[d];
    return g;
  });
}

}  // namespace ddprice
