#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace tempura::rng {

// splitmix64 finalizer; good avalanche, stable across platforms.
std::uint64_t mix(std::uint64_t x);

// Derives a named sub-seed from a base seed. All randomness in a run flows
// from one seed through tagged derivations, so two runs that share a seed
// share everything except the factors they deliberately vary.
std::uint64_t derive_seed(std::uint64_t base, std::string_view tag,
                          std::uint64_t index = 0);

// Deterministic sampling on top of std::mt19937_64. The engine's output
// sequence is fixed by the standard; the distribution code lives here because
// std::uniform_int_distribution and std::shuffle are implementation-defined
// and would break cross-platform reproducibility.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Unbiased integer in [0, n) via rejection sampling.
  std::uint64_t uniform_below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_below: n must be > 0");
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t x = engine_();
      if (x >= threshold) return x % n;
    }
  }

  double uniform_unit() {
    // 53-bit mantissa draw in [0, 1).
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Fisher-Yates shuffle.
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(uniform_below(i));
      using std::swap;
      swap(v[i - 1], v[j]);
    }
  }

  // k distinct indices drawn uniformly from [0, population), in draw order.
  std::vector<std::size_t> sample_indices(std::size_t population,
                                          std::size_t k);

 private:
  std::mt19937_64 engine_;
};

}  // namespace tempura::rng
