#pragma once

#include <cmath>
#include <cstdint>

namespace sgdlab {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Counter-based random stream keyed by (master seed, stream id).
///
/// The n-th output is mix64(key + n * golden), so a stream's sequence depends
/// only on its key and never on which thread consumes it. Normal variates use
/// the Marsaglia polar method with a one-value cache, which keeps the output
/// bit-identical across compilers and standard libraries.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t stream_id) noexcept
      : key_(derive_key(master_seed, stream_id)) {}

  static constexpr std::uint64_t derive_key(std::uint64_t master_seed,
                                            std::uint64_t stream_id) noexcept {
    return mix64(mix64(master_seed ^ 0x6A09E667F3BCC908ULL) +
                 stream_id * 0xD1B54A32D192ED03ULL);
  }

  std::uint64_t next_u64() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * kGolden);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform on (0, 1).
  double uniform_open() noexcept {
    return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
  }

  /// Uniform integer in [0, bound). Multiply-shift reduction.
  std::uint64_t below(std::uint64_t bound) noexcept {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
  }

  double normal() noexcept {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    cached_ = v * f;
    has_cached_ = true;
    return u * f;
  }

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t draws() const noexcept { return counter_; }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace sgdlab
