#include "ddprice/synth.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "ddprice/rng.hpp"

namespace ddprice {

MultiproductSpec gen_synthetic(const SyntheticConfig& cfg) {
  const std::size_t n = cfg.alpha_override.empty() ? cfg.n : cfg.alpha_override.size();
  if (n < 1) throw std::invalid_argument("gen_synthetic: n must be >= 1");
  if (cfg.m < 0) throw std::invalid_argument("gen_synthetic: m must be >= 0");
  if (!(cfg.alpha_lo > 0.0 && cfg.alpha_hi >= cfg.alpha_lo))
    throw std::invalid_argument("gen_synthetic: require 0 < alpha_lo <= alpha_hi");
  if (!(cfg.w_lo_factor > 0.0 && cfg.w_hi_factor >= cfg.w_lo_factor))
    throw std::invalid_argument("gen_synthetic: require 0 < w_lo_factor <= w_hi_factor");
  for (double a : cfg.alpha_override)
    if (!(a > 0.0) || !std::isfinite(a))
      throw std::invalid_argument("gen_synthetic: price-list values must be positive and finite");

  const StreamFamily fam(cfg.seed, /*instance=*/0, stream_method::kGenerator);
  RngStream alpha_rng = fam.stream(1, 0);
  RngStream w_rng = fam.stream(2, 0);

  MultiproductSpec spec;
  spec.n = n;
  spec.m = cfg.m;
  spec.a0 = cfg.a0_factor * static_cast<double>(n);
  spec.x_min = cfg.x_min;
  spec.x_max = cfg.x_max;
  spec.alpha.resize(n);
  spec.gamma.resize(n);
  spec.eta1.resize(n);
  spec.eta2.resize(n);
  spec.eta3.resize(n);

  const double two_pi = 2.0 * M_PI;
  for (std::size_t i = 0; i < n; ++i) {
    spec.alpha[i] = cfg.alpha_override.empty() ? alpha_rng.next_uniform(cfg.alpha_lo, cfg.alpha_hi)
                                               : cfg.alpha_override[i];
    spec.gamma[i] = two_pi / (std::sqrt(6.0) * spec.alpha[i]);
    const double w = w_rng.next_uniform(cfg.w_lo_factor * spec.alpha[i],
                                        cfg.w_hi_factor * spec.alpha[i]);
    spec.eta1[i] = 2.0 * w;
    spec.eta2[i] = w;
    spec.eta3[i] = 3.0 * w;
  }
  const double per_product = static_cast<double>(cfg.m) / static_cast<double>(n);
  spec.cost_l.assign(n, cfg.l_factor * per_product);
  spec.cost_u.assign(n, cfg.u_factor * per_product);

  spec.validate();
  return spec;
}

Vec read_price_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open price list");
  Vec prices;
  std::string raw;
  long lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::size_t comment = raw.find('#');
    std::istringstream is(comment == std::string::npos ? raw : raw.substr(0, comment));
    std::string tok;
    if (!(is >> tok)) continue;  // blank line
    std::string extra;
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected one price, got '" +
                        tok + "'");
    }
    if (is >> extra)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected one price per line");
    if (!(v > 0.0))
      throw ConfigError(path + ":" + std::to_string(lineno) + ": prices must be positive");
    prices.push_back(v);
  }
  if (prices.empty()) throw ConfigError(path + ": price list is empty");
  return prices;
}

}  // namespace ddprice
