#include "ddprice/box.hpp"

#include <algorithm>
#include <cmath>

namespace ddprice {

FeasibleBox::FeasibleBox(double lo, double hi, std::size_t dim) : lo_(lo), hi_(hi), dim_(dim) {
  if (!(lo < hi)) throw std::invalid_argument("FeasibleBox: require lo < hi");
  if (dim == 0) throw std::invalid_argument("FeasibleBox: require dim >= 1");
  if (!std::isfinite(lo) || !std::isfinite(hi))
    throw std::invalid_argument("FeasibleBox: bounds must be finite");
}

bool FeasibleBox::contains(const Vec& x, double slack) const {
  if (x.size() != dim_) return false;
  for (double v : x)
    if (!(v >= lo_ - slack && v <= hi_ + slack)) return false;
  return true;
}

double FeasibleBox::diameter() const {
  return std::sqrt(static_cast<double>(dim_)) * (hi_ - lo_);
}

Vec project_box(const Vec& x, const FeasibleBox& box) {
  require_dim(x, box.dim(), "project_box");
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::clamp(x[i], box.lo(), box.hi());
  return out;
}

Vec gradient_mapping(const Vec& x, const Vec& g, double eta, const FeasibleBox& box) {
  if (!(eta > 0.0)) throw std::invalid_argument("gradient_mapping: eta must be positive");
  require_dim(x, box.dim(), "gradient_mapping");
  require_dim(g, box.dim(), "gradient_mapping");
  const Vec stepped = project_box(axpy(x, -eta, g), box);
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - stepped[i]) / eta;
  return out;
}

}  // namespace ddprice
