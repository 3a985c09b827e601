#pragma once

#include <cstddef>

#include "ddprice/types.hpp"

namespace ddprice {

/// Axis-aligned box [lo, hi]^dim with lo < hi; the feasible price set.
class FeasibleBox {
 public:
  FeasibleBox(double lo, double hi, std::size_t dim);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  std::size_t dim() const { return dim_; }

  bool contains(const Vec& x, double slack = 0.0) const;
  /// Euclidean diameter sqrt(dim) * (hi - lo).
  double diameter() const;

 private:
  double lo_;
  double hi_;
  std::size_t dim_;
};

/// Euclidean projection onto the box (coordinatewise clamp).
Vec project_box(const Vec& x, const FeasibleBox& box);

/// Projected gradient mapping G(x, g, eta) = (x - proj(x - eta * g)) / eta.
/// Fixed points of the projected step are exactly its zeros.
Vec gradient_mapping(const Vec& x, const Vec& g, double eta, const FeasibleBox& box);

}  // namespace ddprice
