#pragma once

#include <cstdint>

namespace ddprice {

// Counter-based random streams.
//
// Every random draw in the library is attributable to a stream key derived
// from (root_seed, instance, method, iteration, sample).  Streams are cheap
// to construct, independent of thread scheduling, and reproduce bit-for-bit
// across runs and worker counts: parallel code derives the stream for sample
// index s directly instead of sharing one sequential generator.

/// SplitMix64 finalizer; bijective 64-bit mixer.
std::uint64_t mix64(std::uint64_t z) noexcept;

/// Fold words into a stream key.  Order-sensitive (a,b) != (b,a).
std::uint64_t derive_key(std::uint64_t root, std::uint64_t instance, std::uint64_t method,
                         std::uint64_t iteration, std::uint64_t sample) noexcept;

/// Deterministic generator seeded by a stream key (SplitMix64 sequence).
class RngStream {
 public:
  explicit RngStream(std::uint64_t key) noexcept : state_(key) {}

  std::uint64_t next_u64() noexcept;
  /// Uniform on [0, 1) with 53 random bits.
  double next_double() noexcept;
  /// Uniform on [lo, hi).
  double next_uniform(double lo, double hi) noexcept;
  /// Standard normal via inverse-CDF transform (one uniform per draw).
  double next_gaussian() noexcept;
  /// Uniform integer in [0, n), n >= 1.
  std::uint64_t next_below(std::uint64_t n) noexcept;
  /// +1 or -1 with equal probability.
  double next_rademacher() noexcept;

 private:
  std::uint64_t state_;
};

/// Identifies (root, instance, method); spawns per-(iteration, sample) streams.
class StreamFamily {
 public:
  StreamFamily() noexcept : StreamFamily(0, 0, 0) {}
  StreamFamily(std::uint64_t root_seed, std::uint64_t instance, std::uint64_t method) noexcept
      : root_(root_seed), instance_(instance), method_(method) {}

  RngStream stream(std::uint64_t iteration, std::uint64_t sample) const noexcept {
    return RngStream(derive_key(root_, instance_, method_, iteration, sample));
  }

  StreamFamily with_method(std::uint64_t method) const noexcept {
    return StreamFamily(root_, instance_, method);
  }

  std::uint64_t root() const noexcept { return root_; }
  std::uint64_t instance() const noexcept { return instance_; }
  std::uint64_t method() const noexcept { return method_; }

 private:
  std::uint64_t root_;
  std::uint64_t instance_;
  std::uint64_t method_;
};

/// Stable method identifiers used in stream derivation.
namespace stream_method {
inline constexpr std::uint64_t kPsg = 1;
inline constexpr std::uint64_t kPsgSpecialized = 2;
inline constexpr std::uint64_t kL2Rgd = 3;
inline constexpr std::uint64_t kSpsa = 4;
inline constexpr std::uint64_t kPsdAd = 5;
inline constexpr std::uint64_t kRandomSearch = 6;
inline constexpr std::uint64_t kOutputIndex = 7;
inline constexpr std::uint64_t kNerEval = 100;
inline constexpr std::uint64_t kGenerator = 200;
inline constexpr std::uint64_t kOracle = 300;
inline constexpr std::uint64_t kTest = 900;
}  // namespace stream_method

}  // namespace ddprice
