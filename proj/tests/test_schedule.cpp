#include <cmath>

#include "ddprice/schedule.hpp"
#include "ddprice/stats.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace ddprice;

TEST_SUITE_BEGIN("schedule");

TEST_CASE("theoretical schedule reproduces the guarantee constants") {
  // L_f = 1, f_max = 1, M = 1  =>  L_Ef = 2.
  const StepSchedule s = theoretical_schedule(1.0, 1.0, 1.0, 1.0);
  CHECK(s.alpha(1) == doctest::Approx(1.0));
  CHECK(s.alpha(3) == doctest::Approx(0.5));
  CHECK(s.beta(1) == doctest::Approx(0.25));
  CHECK(s.beta(100) == doctest::Approx(0.25));
  CHECK(s.lambda(3) == doctest::Approx(0.375));
  CHECK(s.zeta(4) == doctest::Approx(0.25));
  // sigma^2 = (1 + 2)^2 = 9; m_k = ceil(9k / (2 * 1)).
  CHECK(s.batch(1) == 5);
  CHECK(s.batch(2) == 9);

  SUBCASE("specialized batch rule") {
    // c_max = 1, M = 1: sigma^2 = 4; m_k = ceil(4k/2) = 2k.
    const StepSchedule sp = theoretical_schedule_specialized(1.0, 1.0, 1.0, 1.0, 1.0);
    for (long k : {1L, 2L, 7L, 40L}) CHECK(sp.batch(k) == 2 * k);
    CHECK(sp.beta(1) == doctest::Approx(0.25));
  }
  SUBCASE("degenerate constants are rejected") {
    CHECK_THROWS_AS(theoretical_schedule(0.0, 0.0, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(theoretical_schedule(1.0, 1.0, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(theoretical_schedule(-1.0, 1.0, 1.0, 1.0), std::invalid_argument);
  }
}

TEST_CASE("experiment schedule constants") {
  const StepSchedule s = experiment_schedule(200);
  CHECK(s.alpha(1) == doctest::Approx(5.0));  // outside (0,1]; loop must flag it
  CHECK(s.alpha(9) == doctest::Approx(1.0));
  CHECK(s.alpha(19) == doctest::Approx(0.5));
  CHECK(s.beta(1) == doctest::Approx(0.1 / 400.0));
  CHECK(s.lambda(4) == doctest::Approx(4.0 * (0.1 / 400.0) / 2.0));
  CHECK(s.batch(1) == 20);
  CHECK(s.batch(7) == 140);
  CHECK(s.zeta(5) == doctest::Approx(0.2));

  // Tiny m keeps batches at the floor of one sample.
  const StepSchedule s1 = experiment_schedule(1);
  CHECK(s1.batch(1) == 1);
  CHECK(s1.batch(9) == 1);
  CHECK(s1.batch(11) == 2);

  CHECK_THROWS_AS(experiment_schedule(0), std::invalid_argument);
}

TEST_CASE("sample_output_index") {
  const StepSchedule s = theoretical_schedule(1.0, 1.0, 1.0, 1.0);
  const double l_ef = 2.0;

  SUBCASE("single iteration is always chosen") {
    RngStream rng(derive_key(1, 0, stream_method::kOutputIndex, 0, 0));
    for (int t = 0; t < 20; ++t) CHECK(sample_output_index(1, s, l_ef, rng) == 1);
  }
  SUBCASE("beta at the stability edge leaves no valid weight") {
    StepSchedule bad = s;
    bad.beta = [](long) { return 0.5; };  // 1 - L_Ef * beta = 0
    RngStream rng(derive_key(2, 0, stream_method::kOutputIndex, 0, 0));
    CHECK_THROWS_AS(sample_output_index(3, bad, l_ef, rng), std::invalid_argument);
  }
  SUBCASE("alpha >= 1 beyond the first iteration is rejected") {
    StepSchedule bad = s;
    bad.alpha = [](long) { return 1.0; };
    RngStream rng(derive_key(3, 0, stream_method::kOutputIndex, 0, 0));
    CHECK_THROWS_AS(sample_output_index(2, bad, l_ef, rng), std::invalid_argument);
  }
  SUBCASE("empirical law matches the weights (chi-square)") {
    // Hand-computed weights for N = 5: Gamma = (1, 1/3, 1/6, 1/10, 1/15),
    // each weight = 0.125 / Gamma_k.
    const std::vector<double> w{0.125, 0.375, 0.75, 1.25, 1.875};
    const double total = 4.375;
    const int draws = 100000;
    std::vector<double> counts(5, 0.0);
    RngStream rng(derive_key(4, 0, stream_method::kOutputIndex, 0, 0));
    for (int t = 0; t < draws; ++t)
      counts[static_cast<std::size_t>(sample_output_index(5, s, l_ef, rng) - 1)] += 1.0;
    std::vector<double> expected(5);
    for (int k = 0; k < 5; ++k) expected[k] = draws * w[k] / total;
    CHECK(chi2_gof_pvalue(counts, expected) > 0.01);
  }
  SUBCASE("invalid N") {
    RngStream rng(derive_key(5, 0, stream_method::kOutputIndex, 0, 0));
    CHECK_THROWS_AS(sample_output_index(0, s, l_ef, rng), std::invalid_argument);
  }
}

TEST_SUITE_END();
