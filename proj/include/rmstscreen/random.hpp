#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace rmstscreen {

// SplitMix64 finalizer; maps (master seed, stream index) to a child seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

// Portable random source. The engine is std::mt19937_64 seeded through
// std::seed_seq, both of which the standard specifies bit-for-bit. All
// transforms below are written out here instead of using <random>
// distributions, whose algorithms vary between standard libraries, so a
// seed reproduces identical draws on every conforming platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64() { return engine_(); }
  // Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  // Standard normal via Box-Muller (one draw per call).
  double normal();
  // Uniform integer in [0, n).
  std::size_t below(std::size_t n);
  // Chi-square with 2 degrees of freedom: -2 log U.
  double chi_square_2();

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = below(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace rmstscreen
