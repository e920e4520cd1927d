// Deterministic random sources pinned in-repo so seeded runs reproduce
// bit-for-bit across platforms and toolchains; no std:: engine or
// distribution is used anywhere on a seeded path.
//
//   splitmix64     seed expansion / 64-bit mixing (Steele, Lea, Vigna)
//   xoshiro256++   the sample generator (Blackman & Vigna,
//                  https://prng.di.unimi.it/)
//   Box-Muller     normal pairs from exactly two uniform draws, so the
//                  draw count per sample is fixed and streams stay aligned.

#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace nonstat {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stateless mix of a single word (the splitmix64 output function).
inline std::uint64_t hash64(std::uint64_t x) {
  return splitmix64_next(x);
}

// Child seed for replication/stream `index`; children are decorrelated
// from the parent and from each other regardless of execution order.
inline std::uint64_t child_seed(std::uint64_t seed, std::uint64_t index) {
  return hash64(seed ^ index);
}

class Xoshiro256PlusPlus {
 public:
  explicit Xoshiro256PlusPlus(std::uint64_t seed) {
    // Expand the seed through splitmix64 as the authors recommend.
    for (auto& word : state_) word = splitmix64_next(seed);
  }

  std::uint64_t next() {
    std::uint64_t result = std::rotl(state_[0] + state_[3], 23) + state_[0];
    std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = std::rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1]; safe to feed into log().
  double next_unit_positive() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

 private:
  std::array<std::uint64_t, 4> state_;
};

// Box-Muller transform. Each pair of normals consumes exactly two
// generator outputs; the second normal is cached for the next call.
class NormalSampler {
 public:
  double next(Xoshiro256PlusPlus& rng) {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = rng.next_unit_positive();
    double u2 = rng.next_unit();
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  bool has_spare_ = false;
  double spare_ = 0;
};

}  // namespace nonstat
