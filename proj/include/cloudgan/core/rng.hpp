#pragma once

#include <cstdint>
#include <string_view>

namespace cloudgan {

/// Counter-based SplitMix64 stream.
///
/// Output i (0-based) of a stream with key k is mix64(k + (i + 1) * 0x9E3779B97F4A7C15),
/// where mix64 is the SplitMix64 finalizer (xor-shift 30/27/31 with multipliers
/// 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB). Integer ranges use the
/// multiply-shift mapping floor(x * n / 2^64); unit reals use the top 53 bits.
/// Every consumer (splits, crops, initialisation) draws from this stream so
/// results do not depend on the standard library implementation.
class Rng {
 public:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

  explicit Rng(std::uint64_t key) : key_(key) {}

  static constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next_u64() {
    ++counter_;
    return mix64(key_ + counter_ * kGolden);
  }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t bounded(std::uint64_t n) {
    __extension__ using U128 = unsigned __int128;
    return static_cast<std::uint64_t>((static_cast<U128>(next_u64()) * n) >> 64);
  }

  /// Uniform real in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool coin() { return (next_u64() >> 63) != 0; }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Derives an independent stream key from a base seed, a purpose tag and two indices.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag, std::uint64_t a = 0,
                                    std::uint64_t b = 0) {
  std::uint64_t h = Rng::mix64(seed ^ 0x243F6A8885A308D3ULL);
  for (char c : tag) h = Rng::mix64(h ^ static_cast<unsigned char>(c));
  h = Rng::mix64(h ^ Rng::mix64(a + Rng::kGolden));
  h = Rng::mix64(h ^ Rng::mix64(b + 2 * Rng::kGolden));
  return h;
}

}  // namespace cloudgan
