#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

#include "crisis/hash.hpp"

namespace crisis {

// Deterministic splitmix64 stream. Every draw is fully specified here (no
// standard-library distributions), so seeded runs reproduce across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), state_(seed) {}

  // Independent stream derived from the construction seed and a name, not
  // from the parent's draw position.
  Rng substream(std::string_view name) const {
    return Rng(mix64(seed_, fnv1a64(name)));
  }

  std::uint64_t u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 bits of precision.
  double real01() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n). The modulo bias is negligible at the sizes used here.
  std::size_t uniform(std::size_t n) {
    return static_cast<std::size_t>(u64() % static_cast<std::uint64_t>(n));
  }

  // Box-Muller; consumes two uniforms per call.
  double normal() {
    double u1 = 1.0 - real01();
    double u2 = real01();
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::size_t j = uniform(i);
      std::swap(values[i - 1], values[j]);
    }
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
};

}  // namespace crisis
