#ifndef FTN_RNG_HPP
#define FTN_RNG_HPP

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace ftn {

/// Splittable pseudo-random generator: xoshiro256++ seeded through a
/// splitmix64 chain. Substreams are derived by mixing a master seed with a
/// path of 64-bit indices, so Monte Carlo trials can each own an independent
/// stream whose output does not depend on scheduling or worker count.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) { seed_state(seed); }

  /// Stream for (master, path...): e.g. substream(seed, {trial}) or
  /// substream(seed, {key1, key2, trial}).
  static Rng substream(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = master;
    for (std::uint64_t p : path) h = mix(h ^ (p + 0x9e3779b97f4a7c15ULL));
    return Rng(h);
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

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// One fair bit.
  int bit() { return static_cast<int>(next_u64() >> 63); }

  /// Standard normal draw (Box-Muller, second value cached).
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(th);
    has_cached_ = true;
    return r * std::cos(th);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  void seed_state(std::uint64_t seed) {
    std::uint64_t z = seed;
    for (auto& s : s_) {
      z += 0x9e3779b97f4a7c15ULL;
      s = mix(z);
    }
    // all-zero state is invalid for xoshiro
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
  }

  std::uint64_t s_[4];
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace ftn

#endif
