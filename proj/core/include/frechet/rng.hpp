#pragma once

#include <cstdint>

#include "frechet/dense.hpp"

namespace frechet {

/// splitmix64: tiny deterministic generator used for reproducible test
/// vectors. Identical output on every platform for a given seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform in (0, 1].
  double next_unit();
  /// Standard normal via Box-Muller (explicit formula, no library dist).
  double next_normal();

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Real standard-normal vector normalized to unit Euclidean norm.
DenseVector random_unit_vector(std::size_t n, std::uint64_t seed);

/// Real standard-normal vector without normalization.
DenseVector random_normal_vector(std::size_t n, std::uint64_t seed);

/// Complex standard-normal (independent re/im) vector, unit norm.
DenseVector random_unit_complex_vector(std::size_t n, std::uint64_t seed);

}  // namespace frechet
