#pragma once

#include <cstdint>
#include <random>

namespace rtb {

// SplitMix64 finalizer. Used to spread (seed, index) pairs over the full
// 64-bit space before seeding an engine.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seeded random stream. Replicate substreams are derived from
// (master seed, replicate index) only, so results never depend on which
// thread ran which replicate.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng substream(std::uint64_t master_seed, std::uint64_t index) {
    return Rng(mix64(master_seed ^ mix64(index + 0x632be59bd9b4e019ULL)));
  }

  // Uniform on (0, 1); never returns 0.
  double uniform() {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    double u;
    do {
      u = dist(engine_);
    } while (u <= 0.0);
    return u;
  }

  double normal() {
    std::normal_distribution<double> dist(0.0, 1.0);
    return dist(engine_);
  }

  double gamma(double shape, double scale) {
    std::gamma_distribution<double> dist(shape, scale);
    return dist(engine_);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace rtb
