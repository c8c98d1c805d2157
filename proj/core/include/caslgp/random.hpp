#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "caslgp/types.hpp"

namespace caslgp {

/// Seeded random source. Draws are built directly from the raw 64-bit
/// engine output so sequences do not depend on the standard library's
/// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n), n > 0.
  std::size_t below(std::size_t n);

  template <typename T>
  void shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

/// Independent stream seed derived from a master seed (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/// n points uniform on [lo, hi]^d.
std::vector<Vector> sample_uniform(std::size_t n, std::size_t d, double lo, double hi,
                                   std::uint64_t seed);

/// n points uniform on the box [lo_i, hi_i].
std::vector<Vector> sample_box(std::size_t n, const Vector& lo, const Vector& hi,
                               std::uint64_t seed);

}  // namespace caslgp
