#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace fermat {

// SplitMix64 finalizer; used to derive decorrelated seeds from (seed, stream).
inline std::uint64_t split_mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Sub-seed for an indexed stream (repetition, fold assignment, ...).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  return seed ^ split_mix64(stream);
}

// Deterministic random source. mt19937_64 has a standard-pinned output
// sequence, and every derived draw below is an explicit transform of its
// outputs, so results are bit-reproducible across platforms. The library
// variate classes (normal_distribution etc.) are deliberately avoided:
// their algorithms are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  // Uniform on [0, 1) with 53 random mantissa bits.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Uniform integer on [0, n). Modulo bias is ~2^-64 per draw and accepted
  // in exchange for a portable, branch-free mapping.
  std::uint64_t below(std::uint64_t n) { return gen_() % n; }

  // Box-Muller transform, cosine branch only: two uniforms per variate,
  // nothing cached, so the draw count per sample is fixed and documented.
  double normal(double mean, double stddev) {
    double u1 = 1.0 - uniform01();  // (0, 1]: keeps the log argument positive
    double u2 = uniform01();
    double radius = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * radius * std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
  }

 private:
  std::mt19937_64 gen_;
};

// Fisher-Yates with explicit draws (std::shuffle is implementation-defined).
template <class T>
void shuffle(std::vector<T>& values, Rng& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    std::swap(values[i - 1], values[rng.below(i)]);
  }
}

}  // namespace fermat
