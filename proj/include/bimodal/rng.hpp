#pragma once

#include <cstdint>
#include <random>

namespace bimodal {

/// Seeded 64-bit Mersenne Twister stream. The output sequence for a given
/// seed is fixed by the standard, so draws are reproducible across hosts.
/// Streams are single-owner; parallel work takes substreams from split().
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed = 42) : seed_(seed), engine_(mix(seed)) {}

  std::uint64_t seed() const { return seed_; }

  /// Uniform on the open interval (0, 1), 53 bits of resolution.
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Independent substream keyed by index; does not advance this stream.
  RngStream split(std::uint64_t index) const {
    return RngStream(mix(seed_ ^ mix(index + 0x632be59bd9b4e019ULL)));
  }

 private:
  // SplitMix64 finalizer.
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace bimodal
