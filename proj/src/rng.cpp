#include "knn/rng.hpp"

namespace knn {

std::vector<Rational> Rng::positives(int count) {
  std::vector<Rational> v;
  v.reserve(count);
  for (int i = 0; i < count; ++i) v.push_back(positive());
  return v;
}

Rng Rng::split() {
  // splitmix64 finalizer over a fresh draw
  std::uint64_t z = eng_() + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return Rng(z ^ (z >> 31));
}

}  // namespace knn
