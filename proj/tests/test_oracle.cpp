#include <cmath>

#include "doctest.h"
#include "support.hpp"

using namespace ddprice;
using ddtest::tiny_spec;

TEST_SUITE_BEGIN("oracle");

TEST_CASE("enumeration visits the full support with unit mass") {
  const MultiproductModel model(tiny_spec());
  CHECK(model.outcome_count() == 10.0);  // compositions of 3 into 3 slots

  const EnumerationReport rep = enumerate_expectation(model, {1.0, 2.0});
  CHECK(rep.outcomes == 10.0);
  CHECK(rep.prob_mass == doctest::Approx(1.0).epsilon(1e-12));

  SUBCASE("zero buyers yield the single empty outcome") {
    MultiproductSpec s = tiny_spec();
    s.m = 0;
    const MultiproductModel m0(s);
    const EnumerationReport r0 = enumerate_expectation(m0, {1.0, 2.0});
    CHECK(r0.outcomes == 1.0);
    CHECK(r0.expected_f == 0.0);
    CHECK(norm2(r0.grad) == 0.0);
  }
  SUBCASE("oversized supports are refused with the count named") {
    MultiproductSpec s = tiny_spec();
    s.m = 4000;  // C(4002, 2) ~ 8e6 outcomes
    const MultiproductModel big(s);
    CHECK_THROWS_AS(enumerate_expectation(big, {1.0, 2.0}), std::invalid_argument);
  }
}

TEST_CASE("finite differences recover simple gradients") {
  CHECK(finite_diff_gradient([](const Vec& v) { return norm2_sq(v); }, {1.0, 2.0}, 1e-6)[0] ==
        doctest::Approx(2.0).epsilon(1e-6));
  CHECK(finite_diff_gradient([](const Vec& v) { return norm2_sq(v); }, {1.0, 2.0}, 1e-6)[1] ==
        doctest::Approx(4.0).epsilon(1e-6));
  const Vec zero = finite_diff_gradient([](const Vec&) { return 3.14; }, {1.0, 2.0}, 1e-6);
  CHECK(norm2(zero) == 0.0);
  CHECK_THROWS_AS(finite_diff_gradient([](const Vec&) { return 0.0; }, {1.0}, 0.0),
                  std::invalid_argument);
}

TEST_CASE("the two oracles agree: FD of enumerated E[f] vs analytic gradient") {
  const MultiproductModel model(tiny_spec());
  RngStream rng(derive_key(21, 0, stream_method::kOracle, 0, 0));
  for (int t = 0; t < 20; ++t) {
    const Vec x = ddtest::random_feasible(model.box(), rng);
    const EnumerationReport rep = enumerate_expectation(model, x);
    const Vec fd = finite_diff_gradient(
        [&](const Vec& q) { return enumerate_expectation(model, q).expected_f; }, x, 1e-5);
    for (std::size_t d = 0; d < fd.size(); ++d) {
      const double tol = std::max(1e-6, 1e-5 * std::fabs(rep.grad[d]));
      CHECK(std::fabs(rep.grad[d] - fd[d]) <= tol);
    }
  }
}

TEST_CASE("unbiasedness audit") {
  const MultiproductModel model(tiny_spec());
  const Vec x{1.2, 2.2};
  const EnumerationReport rep = enumerate_expectation(model, x);
  const StreamFamily fam(5150, 0, stream_method::kOracle);

  SUBCASE("general estimator passes at delta = 0 and delta = f_max") {
    const UnbiasednessReport r0 = check_unbiased(model, x, 0.0, 100000, fam, rep.grad);
    CHECK(r0.pass);
    const UnbiasednessReport r1 =
        check_unbiased(model, x, model.f_max_bound(), 100000, fam, rep.grad);
    CHECK(r1.pass);
  }
  SUBCASE("specialized estimator passes") {
    const UnbiasednessReport r =
        check_unbiased_specialized(model, x, 0.0, 100000, fam, rep.grad);
    CHECK(r.pass);
  }
  SUBCASE("a deterministic model gives exact zero z-scores") {
    const ddtest::QuadraticModel det({0.4}, FeasibleBox(0.0, 1.0, 1));
    const Vec q{0.9};
    const UnbiasednessReport r =
        check_unbiased(det, q, 0.0, 1000, fam, det.objective_grad_x(q, {0.0}));
    CHECK(r.pass);
    CHECK(r.max_abs_z == 0.0);
  }
  SUBCASE("a shifted target is flagged") {
    Vec wrong = rep.grad;
    wrong[0] += 0.5;
    const UnbiasednessReport r = check_unbiased(model, x, 0.0, 100000, fam, wrong);
    CHECK_FALSE(r.pass);
  }
}

TEST_CASE("variance audit against declared ceilings") {
  const MultiproductModel model(tiny_spec());
  const Vec x{0.8, 1.1};
  const EnumerationReport rep = enumerate_expectation(model, x);
  const StreamFamily fam(6001, 0, stream_method::kOracle);

  const double lf = model.lipschitz_f();
  const double fmax = model.f_max_bound();
  const double mb = model.score_bound();

  SUBCASE("general bound (L_f + 2 f_max M)^2 within |delta| <= f_max") {
    const double ceiling = (lf + 2.0 * fmax * mb) * (lf + 2.0 * fmax * mb);
    for (double delta : {0.0, fmax, -fmax}) {
      const VarianceReport r = check_variance_bound(model, x, delta, 30000, fam, rep.grad, ceiling);
      CHECK(r.pass);
    }
  }
  SUBCASE("specialized bound 4 (c_max M)^2 within |delta| <= c_max") {
    const double cmax = model.c_max_bound();
    const double ceiling = 4.0 * (cmax * mb) * (cmax * mb);
    for (double delta : {0.0, cmax, -cmax}) {
      const VarianceReport r =
          check_variance_bound_specialized(model, x, delta, 30000, fam, rep.grad, ceiling);
      CHECK(r.pass);
    }
  }
  SUBCASE("the mean gradient obeys ||grad E f|| <= L_f + f_max M") {
    RngStream rng(derive_key(22, 0, stream_method::kOracle, 0, 0));
    for (int t = 0; t < 20; ++t) {
      const Vec q = ddtest::random_feasible(model.box(), rng);
      CHECK(norm2(enumerate_expectation(model, q).grad) <= lf + fmax * mb);
    }
  }
}

TEST_SUITE_END();
