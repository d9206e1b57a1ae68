#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <utility>

namespace hpstat {

/// Counter-based generator: the n-th draw of stream (seed, stream) is a pure
/// function of (seed, stream, n), so per-trial streams can be evaluated in any
/// order or on any thread. The mixing function is SplitMix64's finalizer.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  constexpr CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_(mix(mix(seed) ^ (stream * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL))) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept { return mix(key_ + (++counter_) * kGamma); }

  /// Uniform integer in [0, bound), unbiased (Lemire's multiply-and-reject).
  std::uint64_t bounded(std::uint64_t bound) noexcept {
    unsigned __int128 product = static_cast<unsigned __int128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        product = static_cast<unsigned __int128>((*this)()) * bound;
        low = static_cast<std::uint64_t>(product);
      }
    }
    return static_cast<std::uint64_t>(product >> 64);
  }

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z += kGamma;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Fisher-Yates: after the call the first `count` slots hold a uniform random
/// ordered sample without replacement of the original elements.
template <typename T>
void partial_shuffle(std::span<T> values, std::size_t count, CounterRng& rng) {
  const std::size_t n = values.size();
  if (count > n) count = n;
  for (std::size_t i = 0; i < count && i + 1 < n; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.bounded(n - i));
    using std::swap;
    swap(values[i], values[j]);
  }
}

template <typename T>
void shuffle(std::span<T> values, CounterRng& rng) {
  partial_shuffle(values, values.size(), rng);
}

}  // namespace hpstat
