#pragma once

// Deterministic randomness: a counter-based hash for environment fields and
// seed derivation, plus a xoshiro256++ stream for simulation clocks. All
// draws are reproducible bit-for-bit given the same seeds, independent of
// execution order across replicas.

#include <cstdint>
#include <cmath>

namespace fluctlab {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Stateless avalanche of a single word.
inline std::uint64_t hash_u64(std::uint64_t x) {
  std::uint64_t s = x;
  return splitmix64(s);
}

// Order-sensitive combine; hash_key(a,b) != hash_key(b,a) in general.
inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  return hash_u64(h ^ (0x9e3779b97f4a7c15ull + hash_u64(v) + (h << 6) + (h >> 2)));
}

// Uniform double in [0,1) from 53 random bits.
inline double u64_to_unit(std::uint64_t x) {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

// Module tags keep seed streams disjoint (no seed reuse across modules).
namespace seed_tag {
inline constexpr std::uint64_t kEnvironment = 0x656e76ull;       // "env"
inline constexpr std::uint64_t kInitialConfig = 0x636667ull;     // "cfg"
inline constexpr std::uint64_t kDynamics = 0x64796eull;          // "dyn"
inline constexpr std::uint64_t kWalk = 0x776c6bull;              // "wlk"
inline constexpr std::uint64_t kOuLimit = 0x6f75ull;             // "ou"
}  // namespace seed_tag

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t module_tag,
                                 std::uint64_t index = 0) {
  return hash_combine(hash_combine(master, module_tag), index);
}

// xoshiro256++ (Blackman & Vigna), seeded via splitmix64.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
    has_spare_ = false;
    spare_ = 0.0;
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0,1).
  double uniform() { return u64_to_unit(next_u64()); }

  // Uniform in (0,1]; safe as a log argument.
  double uniform_pos() { return 1.0 - uniform(); }

  double exponential(double rate) { return -std::log(uniform_pos()) / rate; }

  // Standard normal via Box-Muller with one cached spare.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u = uniform_pos();
    const double v = uniform();
    const double r = std::sqrt(-2.0 * std::log(u));
    const double a = 6.283185307179586476925286766559 * v;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
  bool has_spare_;
  double spare_;
};

}  // namespace fluctlab
