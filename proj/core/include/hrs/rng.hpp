#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace hrs {

// Counter-based splittable PRNG (splitmix64 walk per stream). A stream is
// fully determined by (seed, stream_id), so parallel consumers that claim
// disjoint stream ids reproduce draws independently of scheduling.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : state_(mix(seed ^ mix(stream_id + 0x9E3779B97F4A7C15ULL))) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix_out(state_);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Consumes exactly one draw; p = 0 never fires, p = 1 always fires.
  bool next_bernoulli(double p) { return next_unit() < p; }

  // Standard normal via Box-Muller; consumes exactly two draws.
  double next_gaussian() {
    const double u1 = 1.0 - next_unit();  // (0, 1]
    const double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  static std::uint64_t mix_out(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  static std::uint64_t mix(std::uint64_t z) { return mix_out(z + 0x9E3779B97F4A7C15ULL); }

  std::uint64_t state_;
};

// Address of a stream; offsets derive disjoint per-draw streams.
struct RngKey {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  RngStream make() const { return RngStream(seed, stream); }
  RngKey offset(std::uint64_t k) const { return RngKey{seed, stream + k}; }
};

}  // namespace hrs
