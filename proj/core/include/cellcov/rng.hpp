#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace cellcov {

/// Logical purpose of a random stream within one trial. Streams with different
/// roles are statistically independent, so a consumer may skip a role entirely
/// without disturbing the draws seen by the others.
enum class StreamRole : std::uint32_t {
  pattern = 1,
  thinning = 2,
  fading = 3,
  ue_placement = 4,
};

namespace detail {

// SplitMix64 finalizer. Used both to hash stream coordinates and to expand a
// key into engine state.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Counter-seeded xoshiro256++ stream.
///
/// Every logical task derives its own stream from the coordinates
/// (master seed, trial index, role, sequence); no stream is ever shared or
/// split, which makes results independent of thread count and execution
/// order. The sequence coordinate distinguishes redraws of the same trial.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t key) noexcept {
    // Expand the key through SplitMix64, per the xoshiro seeding recipe.
    std::uint64_t x = key;
    for (auto& word : state_) {
      word = detail::mix64(x);
      x = word;
    }
  }

  static RngStream derive(std::uint64_t master_seed, std::uint64_t trial_index, StreamRole role,
                          std::uint32_t sequence = 0) noexcept {
    std::uint64_t k = detail::mix64(master_seed);
    k = detail::mix64(k ^ trial_index);
    k = detail::mix64(k ^ static_cast<std::uint64_t>(role));
    k = detail::mix64(k ^ sequence);
    return RngStream(k);
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }

  /// Unit-mean exponential draw (Rayleigh-fading channel power).
  double exponential() noexcept { return -std::log1p(-uniform01()); }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

}  // namespace cellcov
