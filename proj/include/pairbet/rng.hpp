#pragma once
// Deterministic, platform-independent randomness for the simulation harness.
//
// Scheme (normative, see docs/FORMAT.md):
//  - splitmix64 is the seeding/splitting primitive. substream_seed(master, k)
//    equals the k-th output of a splitmix64 sequence started at `master`,
//    computed in O(1).
//  - Streams are xoshiro256++ generators whose 256-bit state is filled with
//    four successive splitmix64 outputs of the stream seed.
//  - uniform01() maps the top 53 bits of one output to [0,1).
//  - Standard normals use the trigonometric Box-Muller transform on
//    (u1, u2) with u1 in (0,1]; the sine variate is cached.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace pairbet::rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() { return mix64(state_ += kGolden); }

 private:
  std::uint64_t state_;
};

// k-th output of splitmix64 started at `master`.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(master + (index + 1) * kGolden);
}

class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& word : state_) word = sm.next();
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // [0,1), 53-bit resolution
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  // (0,1]; keeps log(u) finite
  double uniform_pos() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }
  // (0,1), half-lattice; used for tie-breaking draws so p-values stay positive
  double uniform_open() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t state_[4];
};

class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : gen_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = gen_.uniform_pos();
    const double u2 = gen_.uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  Xoshiro256pp gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace pairbet::rng
