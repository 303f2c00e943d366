#pragma once

#include <cstdint>

namespace codec {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives a child key from a parent key and one label. Chaining calls builds
/// keys such as (seed, step, candidate, space, observation).
constexpr std::uint64_t derive_key(std::uint64_t parent, std::uint64_t label) noexcept {
  return splitmix64(parent ^ splitmix64(label ^ 0x6a09e667f3bcc909ULL));
}

/// Counter-based stream: output k is splitmix64(key + k * golden), so a stream
/// is fully determined by its key and draw count. Version 1 of the scheme.
class CounterStream {
 public:
  explicit constexpr CounterStream(std::uint64_t key) noexcept : key_(key) {}

  constexpr std::uint64_t next() noexcept {
    ++counter_;
    return splitmix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
  }

  /// Uniform integer in [0, bound). Lemire's multiply-shift with rejection,
  /// so the result is exactly uniform. bound must be > 0.
  std::uint64_t below(std::uint64_t bound) noexcept {
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(next()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  constexpr std::uint64_t key() const noexcept { return key_; }
  constexpr std::uint64_t draws() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Tags separating the neighbor spaces that draw tie-break randomness.
enum class SpaceTag : std::uint64_t { x = 0x5831, xz = 0x585a32 };

}  // namespace codec
