#include <cmath>

#include "ddprice/stats.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace ddprice;
using ddtest::tiny_spec;

TEST_SUITE_BEGIN("multiproduct");

namespace {

MultiproductSpec single_product(long m, double gamma, double alpha, double a0) {
  MultiproductSpec s;
  s.n = 1;
  s.m = m;
  s.alpha = {alpha};
  s.gamma = {gamma};
  s.a0 = a0;
  s.eta1 = s.eta2 = s.eta3 = {0.0};
  s.cost_l = {0.0};
  s.cost_u = {0.0};
  s.x_min = 0.01;
  s.x_max = 10.0;
  return s;
}

}  // namespace

TEST_CASE("piecewise cost matches hand values and is continuous") {
  // Slopes 2 / 1 / 3 with breakpoints l=5, u=15.
  CHECK(piecewise_cost(3.0, 2.0, 1.0, 3.0, 5.0, 15.0) == doctest::Approx(6.0));
  CHECK(piecewise_cost(10.0, 2.0, 1.0, 3.0, 5.0, 15.0) == doctest::Approx(15.0));
  CHECK(piecewise_cost(20.0, 2.0, 1.0, 3.0, 5.0, 15.0) == doctest::Approx(35.0));
  CHECK(piecewise_cost(0.0, 2.0, 1.0, 3.0, 5.0, 15.0) == 0.0);
  for (double q : {4.999999, 5.000001, 14.999999, 15.000001}) {
    const double lo = piecewise_cost(q - 1e-9, 2.0, 1.0, 3.0, 5.0, 15.0);
    const double hi = piecewise_cost(q + 1e-9, 2.0, 1.0, 3.0, 5.0, 15.0);
    CHECK(std::fabs(hi - lo) < 1e-7);
  }
}

TEST_CASE("mnl_probs hand values") {
  SUBCASE("single product at its reference price with a0 = 1 splits 50/50") {
    const MultiproductSpec s = single_product(1, 1.0, 2.0, 1.0);
    const Vec p = mnl_probs({2.0}, s);
    CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("identical products split mass equally") {
    MultiproductSpec s = tiny_spec();
    s.alpha = {1.5, 1.5};
    s.gamma = {0.8, 0.8};
    const Vec p = mnl_probs({2.0, 2.0}, s);
    CHECK(p[1] == doctest::Approx(p[2]).epsilon(1e-15));
  }
  SUBCASE("probabilities stay finite and normalized under extreme utilities") {
    const Vec p = mnl_probs({-1e6, -1e6}, tiny_spec());
    for (double v : p) CHECK(std::isfinite(v));
    CHECK(pairwise_sum(p) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p[0] == doctest::Approx(0.0));  // no-buy mass vanishes
  }
  SUBCASE("random prices normalize") {
    RngStream rng(derive_key(5, 0, stream_method::kTest, 0, 0));
    const MultiproductSpec s = tiny_spec();
    const FeasibleBox box(s.x_min, s.x_max, s.n);
    for (int t = 0; t < 100; ++t) {
      const Vec p = mnl_probs(ddtest::random_feasible(box, rng), s);
      CHECK(pairwise_sum(p) == doctest::Approx(1.0).epsilon(1e-12));
      for (double v : p) CHECK(v >= 0.0);
    }
  }
}

TEST_CASE("mnl_score hand values and identities") {
  SUBCASE("score vanishes at the mean demand") {
    const MultiproductSpec s = tiny_spec();
    const Vec x{1.0, 2.0};
    const Vec p = mnl_probs(x, s);
    Vec xi(3);
    for (int j = 0; j < 3; ++j) xi[j] = 3.0 * p[j];  // fractional; free function only
    const Vec sc = mnl_score(x, xi, s);
    CHECK(norm2(sc) == doctest::Approx(0.0).epsilon(1e-14));
  }
  SUBCASE("single product, two buyers, none bought") {
    // gamma=2, price at reference with a0=1 so p_1 = 1/2; xi = (2, 0).
    const MultiproductSpec s = single_product(2, 2.0, 3.0, 1.0);
    const Vec sc = mnl_score({3.0}, {2.0, 0.0}, s);
    CHECK(sc[0] == doctest::Approx(2.0).epsilon(1e-14));
  }
  SUBCASE("collapsed and expanded forms agree to near machine precision") {
    const MultiproductSpec s = tiny_spec();
    const FeasibleBox box(s.x_min, s.x_max, s.n);
    RngStream rng(derive_key(6, 0, stream_method::kTest, 0, 0));
    const MultiproductModel model(s);
    for (int t = 0; t < 200; ++t) {
      const Vec x = ddtest::random_feasible(box, rng);
      RngStream draw = rng;
      const Vec xi = model.sample_one(x, draw);
      const Vec a = mnl_score(x, xi, s);
      const Vec b = mnl_score_expanded(x, xi, s);
      for (std::size_t k = 0; k < a.size(); ++k) {
        const double scale = std::max(1.0, std::fabs(a[k]));
        CHECK(std::fabs(a[k] - b[k]) <= 1e-12 * scale);
      }
    }
  }
  SUBCASE("score matches finite differences of the log pmf") {
    const MultiproductModel model(tiny_spec());
    RngStream rng(derive_key(8, 0, stream_method::kTest, 0, 0));
    for (int t = 0; t < 100; ++t) {
      const Vec x = ddtest::random_feasible(model.box(), rng);
      RngStream draw = rng;
      const Vec xi = model.sample_one(x, draw);
      const Vec sc = model.score(x, xi);
      const Vec fd = finite_diff_gradient(
          [&](const Vec& q) { return model.log_prob(q, xi); }, x, 1e-6);
      for (std::size_t k = 0; k < sc.size(); ++k)
        CHECK(sc[k] == doctest::Approx(fd[k]).epsilon(1e-6).scale(1.0));
    }
  }
  SUBCASE("malformed demand vectors are rejected") {
    const MultiproductModel model(tiny_spec());
    CHECK_THROWS_AS(model.score({1.0, 1.0}, {1.0, 1.0, 0.0}), std::invalid_argument);  // sums to 2
    CHECK_THROWS_AS(model.score({1.0, 1.0}, {1.5, 1.0, 0.5}), std::invalid_argument);  // fractional
    CHECK_THROWS_AS(model.score({1.0, 1.0}, {4.0, -1.0, 0.0}), std::invalid_argument);  // negative
  }
}

TEST_CASE("objective, cost and bounds") {
  const MultiproductModel model(tiny_spec());
  const Vec x{1.0, 2.0};
  const Vec xi{1.0, 2.0, 0.0};
  // sales = 1*2 + 2*0 = 2; cost = c_1(2) + c_2(0) = (0.30 + 0.15) + 0 = 0.45.
  CHECK(model.cost(xi) == doctest::Approx(0.45));
  CHECK(model.objective(x, xi) == doctest::Approx(-2.0 + 0.45));
  CHECK(model.objective_grad_x(x, xi) == Vec{-2.0, 0.0});

  SUBCASE("declared bounds dominate sampled values") {
    RngStream rng(derive_key(9, 0, stream_method::kTest, 0, 0));
    const double f_max = model.f_max_bound();
    const double m_bound = model.score_bound();
    double worst_f = 0.0, worst_s = 0.0;
    for (int t = 0; t < 10000; ++t) {
      const Vec xq = ddtest::random_feasible(model.box(), rng);
      RngStream draw = rng;
      const Vec sample = model.sample_one(xq, draw);
      worst_f = std::max(worst_f, std::fabs(model.objective(xq, sample)));
      worst_s = std::max(worst_s, norm2(model.score(xq, sample)));
    }
    CHECK(worst_f <= f_max);
    CHECK(worst_s <= m_bound);
  }
}

TEST_CASE("zero buyers degenerate to a deterministic model") {
  MultiproductSpec s = tiny_spec();
  s.m = 0;
  const MultiproductModel model(s);
  RngStream rng(derive_key(10, 0, stream_method::kTest, 0, 0));
  const Vec xi = model.sample_one({1.0, 1.0}, rng);
  CHECK(xi == Vec{0.0, 0.0, 0.0});
  CHECK(model.objective({1.0, 1.0}, xi) == 0.0);
  CHECK(model.log_prob({1.0, 1.0}, xi) == doctest::Approx(0.0));
  CHECK(model.outcome_count() == 1.0);
}

TEST_CASE("sampler matches the multinomial law (chi-square)") {
  const MultiproductSpec s = tiny_spec();
  const MultiproductModel model(s);
  const Vec x{0.8, 1.7};
  // Bin outcomes by their (xi_0, xi_1) pair; xi_2 is determined.
  const int draws = 40000;
  std::vector<double> observed(16, 0.0);
  const StreamFamily fam(2024, 0, stream_method::kTest);
  for (int t = 0; t < draws; ++t) {
    RngStream rng = fam.stream(0, static_cast<std::uint64_t>(t));
    const Vec xi = model.sample_one(x, rng);
    observed[static_cast<std::size_t>(xi[0] * 4 + xi[1])] += 1.0;
  }
  std::vector<double> expected(16, 0.0);
  model.for_each_outcome(x, [&](const Vec& xi, double pr) {
    expected[static_cast<std::size_t>(xi[0] * 4 + xi[1])] += pr * draws;
  });
  CHECK(chi2_gof_pvalue(observed, expected) > 0.01);
}

TEST_CASE("mean_demand and sales_grad_at_mean agree with enumeration and finite differences") {
  const MultiproductModel model(tiny_spec());
  RngStream rng(derive_key(12, 0, stream_method::kTest, 0, 0));
  for (int t = 0; t < 20; ++t) {
    const Vec x = ddtest::random_feasible(model.box(), rng);

    Vec mean_enum(3, 0.0);
    model.for_each_outcome(x, [&](const Vec& xi, double pr) {
      for (int j = 0; j < 3; ++j) mean_enum[j] += pr * xi[j];
    });
    const Vec mean = model.mean_demand(x);
    for (int j = 0; j < 3; ++j) CHECK(mean[j] == doctest::Approx(mean_enum[j]).epsilon(1e-10));

    const Vec fd = finite_diff_gradient(
        [&](const Vec& q) {
          const Vec md = model.mean_demand(q);
          double sales = 0.0;
          for (std::size_t i = 0; i < model.dim(); ++i) sales += q[i] * md[i + 1];
          return sales;
        },
        x, 1e-6);
    const Vec sg = model.sales_grad_at_mean(x);
    for (std::size_t k = 0; k < sg.size(); ++k)
      CHECK(sg[k] == doctest::Approx(fd[k]).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("phi_score composes with the action Jacobian to the price score") {
  const MultiproductModel model(tiny_spec());
  RngStream rng(derive_key(13, 0, stream_method::kTest, 0, 0));
  for (int t = 0; t < 100; ++t) {
    const Vec x = ddtest::random_feasible(model.box(), rng);
    RngStream draw = rng;
    const Vec xi = model.sample_one(x, draw);
    const Vec composed = model.action_prob_jacobian(x).apply(model.phi_score(x, xi));
    const Vec direct = model.score(x, xi);
    for (std::size_t k = 0; k < direct.size(); ++k)
      CHECK(composed[k] == doctest::Approx(direct[k]).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("spec validation rejects inconsistent instances") {
  MultiproductSpec s = tiny_spec();
  s.gamma = {1.0, -0.5};
  CHECK_THROWS_AS(MultiproductModel{s}, std::invalid_argument);
  s = tiny_spec();
  s.a0 = 0.0;
  CHECK_THROWS_AS(MultiproductModel{s}, std::invalid_argument);
  s = tiny_spec();
  s.alpha = {1.0};
  CHECK_THROWS_AS(MultiproductModel{s}, std::invalid_argument);
  s = tiny_spec();
  s.cost_l = {2.0, 2.0};
  s.cost_u = {1.0, 1.0};
  CHECK_THROWS_AS(MultiproductModel{s}, std::invalid_argument);
  s = tiny_spec();
  s.x_min = 5.0;
  s.x_max = 1.0;
  CHECK_THROWS_AS(MultiproductModel{s}, std::invalid_argument);
}

TEST_SUITE_END();
