#include "ddprice/schedule.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace ddprice {

namespace {

StepSchedule guarantee_schedule(double lipschitz_f, double f_max, double score_bound,
                                double sigma_sq, double d_tilde, std::string tag) {
  if (!(lipschitz_f >= 0.0) || !(f_max >= 0.0) || !(score_bound >= 0.0))
    throw std::invalid_argument("theoretical_schedule: bounds must be nonnegative");
  if (!(d_tilde > 0.0)) throw std::invalid_argument("theoretical_schedule: D_tilde must be > 0");
  const double l_ef = lipschitz_f + f_max * score_bound;
  if (!(l_ef > 0.0))
    throw std::invalid_argument("theoretical_schedule: L_f + f_max * M must be positive");
  const double beta = 1.0 / (2.0 * l_ef);
  const double batch_rate = sigma_sq / (l_ef * d_tilde * d_tilde);
  StepSchedule s;
  s.alpha = [](long k) { return 2.0 / (static_cast<double>(k) + 1.0); };
  s.beta = [beta](long) { return beta; };
  s.lambda = [beta](long k) { return static_cast<double>(k) * beta / 2.0; };
  s.zeta = [](long k) { return 1.0 / static_cast<double>(k); };
  s.batch = [batch_rate](long k) {
    return std::max<long>(1, static_cast<long>(std::ceil(batch_rate * static_cast<double>(k))));
  };
  s.tag = std::move(tag);
  return s;
}

}  // namespace

StepSchedule theoretical_schedule(double lipschitz_f, double f_max, double score_bound,
                                  double d_tilde) {
  const double sigma = lipschitz_f + 2.0 * f_max * score_bound;
  return guarantee_schedule(lipschitz_f, f_max, score_bound, sigma * sigma, d_tilde,
                            "theoretical");
}

StepSchedule theoretical_schedule_specialized(double lipschitz_f, double f_max,
                                              double score_bound, double c_max, double d_tilde) {
  if (!(c_max >= 0.0))
    throw std::invalid_argument("theoretical_schedule_specialized: c_max must be nonnegative");
  const double sigma_sq = 4.0 * (c_max * score_bound) * (c_max * score_bound);
  return guarantee_schedule(lipschitz_f, f_max, score_bound, sigma_sq, d_tilde,
                            "theoretical-specialized");
}

StepSchedule experiment_schedule(long m) {
  if (m < 1) throw std::invalid_argument("experiment_schedule: m must be >= 1");
  const double beta = 0.1 / (2.0 * static_cast<double>(m));
  StepSchedule s;
  s.alpha = [](long k) { return 10.0 / (static_cast<double>(k) + 1.0); };
  s.beta = [beta](long) { return beta; };
  s.lambda = [beta](long k) { return static_cast<double>(k) * beta / 2.0; };
  s.zeta = [](long k) { return 1.0 / static_cast<double>(k); };
  s.batch = [m](long k) {
    return std::max<long>(
        1, static_cast<long>(std::ceil(0.1 * static_cast<double>(k) * static_cast<double>(m))));
  };
  s.tag = "experiment";
  return s;
}

long sample_output_index(long n_iters, const StepSchedule& schedule, double l_ef,
                         RngStream& rng) {
  if (n_iters < 1) throw std::invalid_argument("sample_output_index: N must be >= 1");
  std::vector<double> weight(static_cast<std::size_t>(n_iters));
  double gamma = 1.0;  // Gamma_1
  double total = 0.0;
  for (long k = 1; k <= n_iters; ++k) {
    if (k >= 2) {
      const double a = schedule.alpha(k);
      if (!(a > 0.0 && a < 1.0))
        throw std::invalid_argument(
            "sample_output_index: alpha_k must lie in (0,1) for k >= 2 (k=" + std::to_string(k) +
            ")");
      gamma *= 1.0 - a;
    }
    const double b = schedule.beta(k);
    const double w = b * (1.0 - l_ef * b) / gamma;
    if (!(w >= 0.0) || !std::isfinite(w))
      throw std::invalid_argument("sample_output_index: negative or non-finite weight at k=" +
                                  std::to_string(k) + " (check beta_k < 1/L_Ef)");
    weight[static_cast<std::size_t>(k - 1)] = w;
    total += w;
  }
  if (!(total > 0.0))
    throw std::invalid_argument("sample_output_index: all weights vanish; distribution undefined");

  const double u = rng.next_double() * total;
  double acc = 0.0;
  for (long k = 1; k <= n_iters; ++k) {
    acc += weight[static_cast<std::size_t>(k - 1)];
    if (u < acc) return k;
  }
  return n_iters;
}

}  // namespace ddprice
