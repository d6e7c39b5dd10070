#ifndef IDSLAB_RNG_HPP
#define IDSLAB_RNG_HPP

#include <cstdint>

namespace idslab {

// SplitMix64 output mixer (Steele, Lea, Flood; public-domain constants).
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Seed of Monte Carlo sample `index` under a given master seed. Every
// draw of sample s comes from SplitMix64(sample_seed(master, s)), so the
// stream depends only on (master_seed, s) and never on which worker ran
// the sample or in which order.
inline constexpr std::uint64_t sample_seed(std::uint64_t master_seed,
                                           std::uint64_t index) {
  return mix64(master_seed + 0x9e3779b97f4a7c15ull * (index + 1));
}

class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix64(state_);
  }

  // Uniform in the open interval (0,1), 53-bit resolution. Never returns
  // an endpoint, so the value is always a valid quantile argument.
  double next_unit() {
    return (static_cast<double>(next() >> 11) + 0.5) *
           (1.0 / 9007199254740992.0);
  }

  // Uniform on [lo, hi).
  double next_in(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

 private:
  std::uint64_t state_;
};

}  // namespace idslab

#endif  // IDSLAB_RNG_HPP
