#include "ddprice/rng.hpp"

#include "ddprice/stats.hpp"

namespace ddprice {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
}

std::uint64_t mix64(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

std::uint64_t derive_key(std::uint64_t root, std::uint64_t instance, std::uint64_t method,
                         std::uint64_t iteration, std::uint64_t sample) noexcept {
  std::uint64_t k = mix64(root + kGolden);
  k = mix64(k ^ (instance + 0xD1B54A32D192ED03ull));
  k = mix64(k ^ (method + 0x8CB92BA72F3D8DD7ull));
  k = mix64(k ^ (iteration + 0xA24BAED4963EE407ull));
  k = mix64(k ^ (sample + 0x9FB21C651E98DF25ull));
  return k;
}

std::uint64_t RngStream::next_u64() noexcept {
  state_ += kGolden;
  return mix64(state_);
}

double RngStream::next_double() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_uniform(double lo, double hi) noexcept {
  return lo + (hi - lo) * next_double();
}

double RngStream::next_gaussian() noexcept {
  // Inverse CDF keeps consumption at one word per draw, which keeps
  // counter-stream layouts stable.
  double u = next_double();
  // Guard the open interval; next_double() can return exactly 0.
  if (u <= 0.0) u = 0x1.0p-53;
  return normal_quantile(u);
}

std::uint64_t RngStream::next_below(std::uint64_t n) noexcept {
  // Rejection-free multiply-shift; bias is negligible (n << 2^64) for our use.
  if (n <= 1) return 0;
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
}

double RngStream::next_rademacher() noexcept {
  return (next_u64() & 1ull) ? 1.0 : -1.0;
}

}  // namespace ddprice
