#include <cmath>

#include "ddprice/stats.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace ddprice;
using ddtest::tiny_spec;

TEST_SUITE_BEGIN("estimators");

TEST_CASE("score_gradient reduces to the plain gradient in degenerate cases") {
  SUBCASE("baseline equal to the realized objective cancels the score term") {
    const MultiproductModel model(tiny_spec());
    const Vec x{1.0, 2.0};
    const Vec xi{1.0, 2.0, 0.0};
    const Vec g = score_gradient(model, x, xi, model.objective(x, xi));
    CHECK(g == model.objective_grad_x(x, xi));
  }
  SUBCASE("point-mass demand has zero score, any baseline") {
    const ddtest::QuadraticModel model({0.6, 0.4}, FeasibleBox(0.0, 1.0, 2));
    const Vec x{0.2, 0.9};
    for (double delta : {-3.0, 0.0, 7.5}) {
      const Vec g = score_gradient(model, x, {0.0}, delta);
      CHECK(g == model.objective_grad_x(x, {0.0}));
    }
  }
}

TEST_CASE("minibatch_gradient is deterministic and thread-count invariant") {
  const MultiproductModel model(tiny_spec());
  const StreamFamily fam(31, 4, stream_method::kPsg);
  const Vec x{0.7, 1.9};

  const GradientEstimate a = minibatch_gradient(model, x, 0.1, 20, fam, 3, 1);
  const GradientEstimate b = minibatch_gradient(model, x, 0.1, 20, fam, 3, 1);
  CHECK(a.g == b.g);
  CHECK(a.batch_mean_f == b.batch_mean_f);

  // Larger batch so several chunks exist; 1, 2 and 8 workers must agree bitwise.
  const GradientEstimate t1 = minibatch_gradient(model, x, 0.1, 1500, fam, 5, 1);
  const GradientEstimate t2 = minibatch_gradient(model, x, 0.1, 1500, fam, 5, 2);
  const GradientEstimate t8 = minibatch_gradient(model, x, 0.1, 1500, fam, 5, 8);
  CHECK(t1.g == t2.g);
  CHECK(t2.g == t8.g);
  CHECK(t1.batch_mean_f == t8.batch_mean_f);

  SUBCASE("batch of one equals the single-draw estimator") {
    RngStream rng = fam.stream(9, 0);
    const Vec xi = model.sample_one(x, rng);
    const GradientEstimate est = minibatch_gradient(model, x, 0.1, 1, fam, 9, 1);
    CHECK(est.g == score_gradient(model, x, xi, 0.1));
    CHECK(est.batch_mean_f == doctest::Approx(model.objective(x, xi)));
    CHECK(est.batch_size == 1);
  }
  SUBCASE("invalid batch size throws") {
    CHECK_THROWS_AS(minibatch_gradient(model, x, 0.0, 0, fam, 1, 1), std::invalid_argument);
  }
}

TEST_CASE("minibatch averaging shrinks variance like 1/batch") {
  const MultiproductModel model(tiny_spec());
  const StreamFamily fam(77, 1, stream_method::kTest);
  const Vec x{1.3, 2.4};
  const int trials = 10000;

  std::vector<double> single(trials), batched(trials);
  for (int t = 0; t < trials; ++t)
    single[t] = minibatch_gradient(model, x, 0.0, 1, fam, static_cast<std::uint64_t>(t)).g[0];
  const StreamFamily fam2(78, 1, stream_method::kTest);
  for (int t = 0; t < trials; ++t)
    batched[t] = minibatch_gradient(model, x, 0.0, 100, fam2, static_cast<std::uint64_t>(t)).g[0];

  const double ratio = sample_variance(single) / (100.0 * sample_variance(batched));
  CHECK(ratio > 0.5);
  CHECK(ratio < 2.0);
}

TEST_CASE("estimator mean is invariant to the baseline value") {
  const MultiproductModel model(tiny_spec());
  const Vec x{1.1, 2.6};
  const long draws = 200000;
  const double f_max = model.f_max_bound();

  Vec sum0(2, 0.0), sum1(2, 0.0), sumsq0(2, 0.0), sumsq1(2, 0.0);
  const StreamFamily fam(404, 2, stream_method::kTest);
  for (long ell = 0; ell < draws; ++ell) {
    RngStream rng = fam.stream(0, static_cast<std::uint64_t>(ell));
    const Vec xi = model.sample_one(x, rng);
    const Vec g0 = score_gradient(model, x, xi, 0.0);
    const Vec g1 = score_gradient(model, x, xi, f_max);
    for (int d = 0; d < 2; ++d) {
      sum0[d] += g0[d];
      sumsq0[d] += g0[d] * g0[d];
      sum1[d] += g1[d];
      sumsq1[d] += g1[d] * g1[d];
    }
  }
  for (int d = 0; d < 2; ++d) {
    const double m0 = sum0[d] / draws, m1 = sum1[d] / draws;
    const double v0 = sumsq0[d] / draws - m0 * m0, v1 = sumsq1[d] / draws - m1 * m1;
    const double se = std::sqrt((v0 + v1) / draws);
    CHECK(std::fabs(m0 - m1) <= 4.0 * se);
  }
}

TEST_CASE("specialized estimator") {
  SUBCASE("zero cost collapses to the deterministic mean-sales gradient") {
    const MultiproductModel model(ddtest::tiny_spec_zero_cost());
    const StreamFamily fam(9, 0, stream_method::kPsgSpecialized);
    const Vec x{0.9, 1.4};
    const GradientEstimate est = specialized_gradient(model, x, 0.0, 7, fam, 1);
    const Vec expect = scale(model.sales_grad_at_mean(x), -1.0);
    CHECK(est.g == expect);
    CHECK(est.batch_mean_f == 0.0);
  }
  SUBCASE("thread-count invariance") {
    const MultiproductModel model(tiny_spec());
    const StreamFamily fam(10, 0, stream_method::kPsgSpecialized);
    const Vec x{1.5, 0.6};
    const GradientEstimate t1 = specialized_gradient(model, x, 0.2, 900, fam, 2, 1);
    const GradientEstimate t8 = specialized_gradient(model, x, 0.2, 900, fam, 2, 8);
    CHECK(t1.g == t8.g);
    CHECK(t1.batch_mean_f == t8.batch_mean_f);
  }
  SUBCASE("batch mean tracks cost, not the full objective") {
    const MultiproductModel model(tiny_spec());
    const StreamFamily fam(11, 0, stream_method::kPsgSpecialized);
    const Vec x{1.0, 1.0};
    const GradientEstimate est = specialized_gradient(model, x, 0.0, 4000, fam, 3);
    Vec expected_cost_mean{0.0};
    model.for_each_outcome(x, [&](const Vec& xi, double pr) {
      expected_cost_mean[0] += pr * model.cost(xi);
    });
    CHECK(est.batch_mean_f == doctest::Approx(expected_cost_mean[0]).epsilon(0.05));
  }
}

TEST_CASE("ogd_update tracks the running mean for zeta_k = 1/k") {
  SUBCASE("hand steps") {
    BaselineState s{0.0, 1};
    s = ogd_update(s, 2.0, 0.5);  // zeta_2
    CHECK(s.delta == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.k == 2);
    s = ogd_update(s, 4.0, 1.0 / 3.0);  // zeta_3
    CHECK(s.delta == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(s.k == 3);
  }
  SUBCASE("zeta = 1 forgets the past entirely") {
    BaselineState s{123.0, 1};
    s = ogd_update(s, -7.0, 1.0);
    CHECK(s.delta == -7.0);
  }
  SUBCASE("running-mean identity over random sequences") {
    RngStream rng(derive_key(606, 0, stream_method::kTest, 0, 0));
    for (int trial = 0; trial < 200; ++trial) {
      const int len = 1 + static_cast<int>(rng.next_below(150));
      BaselineState s{rng.next_uniform(-1.0, 1.0), 1};
      double running = s.delta;
      for (int k = 1; k <= len; ++k) {
        const double v = rng.next_uniform(-1.0, 1.0);
        s = ogd_update(s, v, 1.0 / (k + 1.0));
        running += v;
      }
      CHECK(std::fabs(s.delta - running / (len + 1.0)) <= 1e-12);
    }
  }
  SUBCASE("zeta outside (0,1] throws") {
    CHECK_THROWS_AS(ogd_update({0.0, 1}, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ogd_update({0.0, 1}, 1.0, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(ogd_update({0.0, 1}, 1.0, -0.1), std::invalid_argument);
  }
}

TEST_CASE("mc_mean_objective is deterministic and exact for point masses") {
  const ddtest::QuadraticModel model({0.5, 0.5}, FeasibleBox(0.0, 1.0, 2));
  const StreamFamily fam(1, 0, stream_method::kNerEval);
  const Vec x{0.25, 0.75};
  const double v = mc_mean_objective(model, x, 500, fam);
  CHECK(v == doctest::Approx(model.objective(x, {0.0})).epsilon(1e-15));
  CHECK(mc_mean_objective(model, x, 500, fam, 0, 4) == v);
}

TEST_SUITE_END();
