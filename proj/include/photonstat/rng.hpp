#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "photonstat/types.hpp"

namespace photonstat {

/// Deterministic 64-bit mixing (splitmix64 finalizer) used to key streams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Engine for stream `stream` of `seed`; streams are independent of each
/// other and of evaluation order.
inline std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(mix_seed(seed, stream));
}

// Conversions below are written out so that draws do not depend on the
// standard library's distribution implementations.

/// Uniform on [0, 1) with 53 random bits.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Box-Muller pair generator.
class StandardNormal {
 public:
  double operator()(std::mt19937_64& rng) {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1;
    do {
      u1 = unit_uniform(rng);
    } while (u1 <= 0.0);
    const double u2 = unit_uniform(rng);
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(kTwoPi * u2);
    has_spare_ = true;
    return r * std::cos(kTwoPi * u2);
  }

 private:
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace photonstat
