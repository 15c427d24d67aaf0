#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace hyperrc {

// Deterministic RNG built on mt19937_64 with explicit bit-to-double mapping.
// std::uniform_real_distribution / normal_distribution are implementation
// defined, so we map bits ourselves: identical seed => identical stream.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t bits() { return gen_(); }

  // Uniform in [0, 1) with 53 significand bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n), n > 0.
  std::uint64_t below(std::uint64_t n) {
    // Rejection sampling to avoid modulo bias.
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return x % n;
  }

  // Standard normal via Box-Muller (polar form avoided to keep the stream
  // consumption deterministic per draw pair).
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Uniform point on the unit sphere S^{d-1}.
  std::vector<double> unit_sphere(int d) {
    std::vector<double> v(d);
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (int i = 0; i < d; ++i) {
        v[i] = gaussian();
        norm2 += v[i] * v[i];
      }
    } while (norm2 == 0.0);
    double inv = 1.0 / std::sqrt(norm2);
    for (double& x : v) x *= inv;
    return v;
  }

  // Derive an independent child stream; splitmix64 mixes tag into the seed.
  Rng split(std::uint64_t tag) {
    std::uint64_t z = seed_mix_ + (tag + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    z ^= gen_();
    return Rng(z ^ (z >> 31));
  }

private:
  std::mt19937_64 gen_;
  std::uint64_t seed_mix_ = 0x6A09E667F3BCC908ull;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace hyperrc
