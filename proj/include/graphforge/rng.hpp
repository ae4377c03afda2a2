#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace graphforge {

/// Portable sampling generator.
///
/// Bits come from std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Bounded integers are drawn with plain rejection sampling instead
/// of std::uniform_int_distribution (whose algorithm is implementation
/// defined), so a seed produces the same samples on every platform.
class SampleRng {
 public:
  explicit SampleRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform double in [0, 1) with 53 random bits.
  double unit();

  /// Standard normal via Box-Muller on unit().
  double normal();

 private:
  std::mt19937_64 engine_;
};

/// `count` distinct values of [0, n) chosen uniformly without replacement
/// (partial Fisher-Yates), returned in ascending order.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t count, SampleRng& rng);

}  // namespace graphforge
