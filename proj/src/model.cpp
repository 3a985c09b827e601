#include "ddprice/model.hpp"

namespace ddprice {

std::vector<Vec> ProblemModel::sample(const Vec& x, RngStream& rng, std::size_t count) const {
  std::vector<Vec> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sample_one(x, rng));
  return out;
}

}  // namespace ddprice
