#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ddprice {

/// Dense vector used for prices, demand realizations and gradients.
/// Discrete demand models store integer counts in double slots.
using Vec = std::vector<double>;

using PriceVector = Vec;
using DemandSample = Vec;

/// Minimal dense row-major matrix for small Jacobians (n x p).
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  /// y = M * v, v of length cols().
  Vec apply(const Vec& v) const;

  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Raised when a quantity leaves its mathematical domain at run time
/// (vanishing densities, non-finite scores, singular linear systems).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised by configuration parsing/validation; message carries file:line context.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// --- small vector helpers ----------------------------------------------------

Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec scale(const Vec& a, double s);
/// a + s * b
Vec axpy(const Vec& a, double s, const Vec& b);
double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);
double norm2_sq(const Vec& a);
bool all_finite(const Vec& a);

void require_dim(const Vec& v, std::size_t dim, const char* what);

}  // namespace ddprice
