#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace ddprice {

// Numeric and statistical utilities shared across the library and tests.

/// Sum in a fixed pairwise (balanced-tree) order.  Deterministic for a given
/// input order and more accurate than naive accumulation on long vectors.
double pairwise_sum(const double* data, std::size_t n);
double pairwise_sum(const std::vector<double>& v);

double mean(const std::vector<double>& v);
/// Unbiased sample variance (n-1 denominator); 0 for n < 2.
double sample_variance(const std::vector<double>& v);
double sample_stddev(const std::vector<double>& v);

double normal_pdf(double z);
/// Standard normal CDF via erfc; accurate in both tails.
double normal_cdf(double z);
/// Inverse standard normal CDF for p in (0,1); Acklam's rational
/// approximation polished by one Halley step (|rel err| < 1e-13).
double normal_quantile(double p);

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double gamma_p(double a, double x);
/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double gamma_q(double a, double x);

/// Chi-square survival function Pr[X > x] with dof degrees of freedom.
double chi2_sf(double x, double dof);

/// Pearson chi-square goodness-of-fit p-value for observed counts against
/// expected counts (bins with expected < merge_below are pooled into a tail
/// bin to keep the asymptotics valid).
double chi2_gof_pvalue(const std::vector<double>& observed, const std::vector<double>& expected,
                       double merge_below = 5.0);

/// One-sample Kolmogorov-Smirnov statistic of `sorted_u` against U(0,1).
/// Input must be sorted ascending; values are probability transforms.
double ks_statistic_uniform(const std::vector<double>& sorted_u);
/// Asymptotic KS p-value for statistic d with sample size n.
double ks_pvalue(double d, std::size_t n);

/// Adaptive Simpson quadrature of f on [a, b] to absolute tolerance tol.
double integrate(const std::function<double(double)>& f, double a, double b, double tol);

}  // namespace ddprice
