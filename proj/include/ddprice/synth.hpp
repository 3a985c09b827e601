#pragma once

#include "ddprice/models/multiproduct.hpp"

namespace ddprice {

/// Seeded generator for benchmark instances.  Defaults follow the synthetic
/// protocol:
///   alpha_i ~ U[0.01, 1],  gamma_i = 2 pi / (sqrt(6) alpha_i),  a0 = 0.25 n,
///   box [0.01, 10],  w_i ~ U[0.25 alpha_i, 0.5 alpha_i],
///   eta1 = 2 w, eta2 = w, eta3 = 3 w,  l_i = 0.5 m / n, u_i = 1.5 m / n.
/// When `alpha_override` is set (one base price per product, e.g. read from
/// a price-list file), those values replace the uniform alpha draws and n is
/// taken from the list; everything else is generated the same way.
struct SyntheticConfig {
  std::size_t n = 20;
  long m = 200;
  std::uint64_t seed = 0;

  double alpha_lo = 0.01, alpha_hi = 1.0;
  double x_min = 0.01, x_max = 10.0;
  double a0_factor = 0.25;
  double w_lo_factor = 0.25, w_hi_factor = 0.5;
  double l_factor = 0.5, u_factor = 1.5;

  Vec alpha_override;
};

MultiproductSpec gen_synthetic(const SyntheticConfig& cfg);

/// Reads one positive price per line (blank lines and `#` comments skipped).
Vec read_price_list(const std::string& path);

}  // namespace ddprice
