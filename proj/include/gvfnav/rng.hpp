#ifndef GVFNAV_RNG_HPP
#define GVFNAV_RNG_HPP

#include <cstdint>
#include <random>

namespace gvfnav {

// Seeded generator with portable sampling. std::uniform_real_distribution is
// implementation-defined, so benchmark reproducibility requires drawing
// uniforms by hand from the raw 64-bit stream.
class Rng {
public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1) with 53 random mantissa bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi) {
    const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(engine_() % span);
  }

  uint64_t raw() { return engine_(); }

private:
  std::mt19937_64 engine_;
};

}  // namespace gvfnav

#endif  // GVFNAV_RNG_HPP
