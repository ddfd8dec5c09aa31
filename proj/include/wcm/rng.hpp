#pragma once

#include <cstdint>

namespace wcm {

// SplitMix64 generator. Chosen because it is seedable, splittable into
// independent substreams, and produces identical sequences on every
// platform, which the verification suite's determinism contract needs.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Uniform in (0, 1]; never zero, so normalized draws keep full support.
  double next_positive() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  double next_in(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

  std::uint64_t next_below(std::uint64_t n) { return next() % n; }

  // Derive an independent substream; substream(i) depends only on the
  // seed this generator was created with and on i.
  SplitMix64 substream(std::uint64_t index) const {
    SplitMix64 mixer(state_ ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
    return SplitMix64(mixer.next());
  }

 private:
  std::uint64_t state_;
};

}  // namespace wcm
