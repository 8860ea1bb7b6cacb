#ifndef IVOL_RNG_HPP
#define IVOL_RNG_HPP

#include <cstdint>
#include <cmath>

namespace ivol {

// Splittable counter-style generator in the SplitMix64 family: each stream
// advances a private state by a private odd increment derived from its
// stream id, so a (seed, stream_id) pair fully determines the draw sequence
// and distinct stream ids give statistically independent streams.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : state_(mix(seed ^ mix(stream_id + 0x9e3779b97f4a7c15ull))),
        gamma_(mix(stream_id * 0xbf58476d1ce4e5b9ull + 0x94d049bb133111ebull) | 1ull) {}

  std::uint64_t next_u64() {
    state_ += gamma_;
    return mix(state_);
  }

  // Uniform on [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Standard normal via the Box-Muller transform; the second value of each
  // pair is cached so consecutive calls consume bits at a fixed rate.
  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = next_double();
    double u2 = next_double();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_;
  std::uint64_t gamma_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Deterministic seed derivation for independent sub-experiments sharing one
// user-facing seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  RngStream s(seed, ~tag);
  return s.next_u64();
}

}  // namespace ivol

#endif
