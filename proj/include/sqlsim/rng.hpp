#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

#include "sqlsim/embedding.hpp"

namespace sqlsim {

/// SplitMix64 finalizer; used to derive independent stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Portable sampling stream.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Bounded draws use rejection on the raw 64-bit output instead of
/// std::uniform_int_distribution (whose algorithm is implementation-defined),
/// so a seed produces the same samples on every platform.
class SampleStream {
 public:
  explicit SampleStream(std::uint64_t seed) : engine_(seed) {}

  /// Seed for one named sub-stream, e.g. one database.
  static std::uint64_t derive(std::uint64_t seed, std::string_view name) {
    return splitmix64(seed ^ splitmix64(fnv1a64(name)));
  }

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return r % bound;
    }
  }

  /// Partial Fisher-Yates: moves a uniform sample of `m` items to the front
  /// of `items` (in draw order) and truncates to it.
  template <typename T>
  void sample_in_place(std::vector<T>& items, std::size_t m) {
    if (m > items.size()) m = items.size();
    for (std::size_t t = 0; t < m; ++t) {
      const std::size_t r = t + static_cast<std::size_t>(below(items.size() - t));
      std::swap(items[t], items[r]);
    }
    items.resize(m);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace sqlsim
