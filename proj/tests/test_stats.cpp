#include <algorithm>
#include <cmath>

#include "ddprice/stats.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace ddprice;

TEST_SUITE_BEGIN("stats");

TEST_CASE("pairwise_sum matches exact sums and is order-stable") {
  std::vector<double> v;
  for (int i = 1; i <= 1000; ++i) v.push_back(static_cast<double>(i));
  CHECK(pairwise_sum(v) == doctest::Approx(500500.0).epsilon(1e-15));
  CHECK(pairwise_sum(v) == pairwise_sum(v));
  CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
}

TEST_CASE("mean and sample variance") {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  CHECK(mean(v) == doctest::Approx(2.5));
  CHECK(sample_variance(v) == doctest::Approx(5.0 / 3.0));
  CHECK(sample_variance(std::vector<double>{3.0}) == 0.0);
  CHECK_THROWS_AS(mean(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("normal cdf/quantile round-trip and reference values") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-10));
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0));
  for (double p : {1e-10, 1e-4, 0.2, 0.5, 0.9, 1.0 - 1e-6}) {
    CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-10));
  }
  CHECK_THROWS_AS(normal_quantile(0.0), std::invalid_argument);
  CHECK_THROWS_AS(normal_quantile(1.0), std::invalid_argument);
}

TEST_CASE("incomplete gamma and chi-square tail") {
  // gamma_p(1, x) = 1 - exp(-x)
  for (double x : {0.1, 1.0, 3.0, 10.0}) {
    CHECK(gamma_p(1.0, x) == doctest::Approx(1.0 - std::exp(-x)).epsilon(1e-12));
    CHECK(gamma_q(1.0, x) == doctest::Approx(std::exp(-x)).epsilon(1e-12));
  }
  CHECK(chi2_sf(0.0, 5.0) == 1.0);
  // 95th percentile of chi2(1).
  CHECK(chi2_sf(3.841458820694124, 1.0) == doctest::Approx(0.05).epsilon(1e-9));
  // chi2(2) tail is exp(-x/2).
  CHECK(chi2_sf(4.0, 2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(chi2_sf(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("chi-square goodness of fit accepts the truth and rejects a lie") {
  RngStream rng(derive_key(99, 0, stream_method::kTest, 0, 0));
  std::vector<double> counts(10, 0.0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) counts[rng.next_below(10)] += 1.0;
  const std::vector<double> uniform(10, n / 10.0);
  CHECK(chi2_gof_pvalue(counts, uniform) > 0.01);

  std::vector<double> skewed(10, n / 20.0);
  skewed[0] = n - 9.0 * (n / 20.0);
  CHECK(chi2_gof_pvalue(counts, skewed) < 1e-9);
}

TEST_CASE("KS test behaves on uniform and shifted samples") {
  RngStream rng(derive_key(77, 0, stream_method::kTest, 0, 0));
  std::vector<double> u(20000);
  for (double& v : u) v = rng.next_double();
  std::sort(u.begin(), u.end());
  const double d = ks_statistic_uniform(u);
  CHECK(ks_pvalue(d, u.size()) > 0.01);

  // Critical value ~1.36/sqrt(n) sits near p = 0.05.
  const double p_crit = ks_pvalue(1.36 / std::sqrt(10000.0), 10000);
  CHECK(p_crit > 0.04);
  CHECK(p_crit < 0.06);

  std::vector<double> bad(u);
  for (double& v : bad) v = std::min(1.0, v * 0.9 + 0.1);  // clearly not U(0,1)
  std::sort(bad.begin(), bad.end());
  CHECK(ks_pvalue(ks_statistic_uniform(bad), bad.size()) < 1e-12);
}

TEST_CASE("adaptive Simpson integration") {
  CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0, 1e-10) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-10) ==
        doctest::Approx(2.0).epsilon(1e-9));
  CHECK(integrate([](double z) { return normal_pdf(z); }, -8.0, 8.0, 1e-10) ==
        doctest::Approx(1.0).epsilon(1e-8));
  CHECK(integrate([](double) { return 1.0; }, 2.0, 2.0, 1e-10) == 0.0);
  CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 0.0, 1.0, 0.0), std::invalid_argument);
}

TEST_SUITE_END();
