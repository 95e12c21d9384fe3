#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "knn/exact.hpp"

namespace knn {

// Seeded 64-bit generator. split() derives an independent child stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), eng_(seed) {}

  std::uint64_t seed() const { return seed_; }
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  // Numerator and denominator uniform in [1,10].
  Rational positive() { return Rational(uniform(1, 10), uniform(1, 10)); }
  std::vector<Rational> positives(int count);
  Rng split();

 private:
  std::uint64_t seed_;
  std::mt19937_64 eng_;
};

}  // namespace knn
