#pragma once

#include <cstdint>
#include <limits>

namespace roadmetric {

/// SplitMix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based generator: the i-th output of stream `key` is
/// mix64(key + (i + 1) * golden), so any output can be produced without
/// touching the others. Substreams are keyed by mixing the parent key with
/// the substream index, which lets per-item draws be generated in any order
/// (or in parallel) with identical results.
///
/// Satisfies UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  constexpr explicit CounterRng(std::uint64_t key, std::uint64_t counter = 0) : key_(key), counter_(counter) {}

  /// Independent stream number `index` derived from `key`.
  static constexpr CounterRng substream(std::uint64_t key, std::uint64_t index) {
    return CounterRng(mix64(key ^ mix64(index * 0xd1342543de82ef95ULL + 0x632be59bd9b4e019ULL)));
  }

  constexpr result_type operator()() { return mix64(key_ + (++counter_) * kGolden); }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  /// Uniform on [0, 1) with 53 random bits.
  constexpr double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  /// Uniform on (0, 1].
  constexpr double uniform_open_closed() { return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53; }

  constexpr std::uint64_t key() const { return key_; }
  constexpr std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace roadmetric
