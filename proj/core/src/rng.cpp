#include "frechet/rng.hpp"

#include <cmath>

namespace frechet {

std::uint64_t SplitMix64::next() {
  state_ += 0x9E3779B97f4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::next_unit() {
  // 53 mantissa bits, shifted into (0, 1].
  return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
}

double SplitMix64::next_normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = next_unit();
  const double u2 = next_unit();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * 3.14159265358979323846 * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

DenseVector random_normal_vector(std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  DenseVector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = rng.next_normal();
  return v;
}

DenseVector random_unit_vector(std::size_t n, std::uint64_t seed) {
  DenseVector v = random_normal_vector(n, seed);
  const double nv = v.norm();
  for (std::size_t i = 0; i < n; ++i) v[i] = v[i] * (1.0 / nv);
  return v;
}

DenseVector random_unit_complex_vector(std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  DenseVector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = Complex(rng.next_normal(), rng.next_normal());
  const double nv = v.norm();
  for (std::size_t i = 0; i < n; ++i) v[i] = v[i] * (1.0 / nv);
  return v;
}

}  // namespace frechet
