#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "driftbench/errors.hpp"

namespace driftbench::numerics {

namespace detail {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  std::uint64_t z = x + kGolden;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace detail

// Self-contained 64-bit generator (xoshiro256++ seeded through splitmix64).
// The (seed, stream_id) pair fully determines the output sequence, and
// distinct stream ids derived from one seed give unrelated sequences, so
// every stochastic component can own a stream that is independent of
// execution order.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id) {
    std::uint64_t base =
        detail::splitmix64(detail::splitmix64(seed) ^ (stream_id + detail::kGolden));
    for (auto& word : state_) {
      base += detail::kGolden;
      word = detail::splitmix64(base);
    }
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) {
      state_[0] = detail::kGolden;
    }
  }

  // Derives a child stream id from arbitrary keys; used to key per-entity
  // streams so parallel schedules cannot change results.
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    return detail::splitmix64(detail::splitmix64(a) ^ (b + detail::kGolden));
  }
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return mix(mix(a, b), c);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = detail::rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = detail::rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Unbiased integer in [0, n).
  std::uint64_t uniform_int(std::uint64_t n) {
    if (n == 0) throw Error(Errc::out_of_range, "uniform_int bound must be positive");
    const std::uint64_t threshold = (0 - n) % n;
    std::uint64_t x = next_u64();
    while (x < threshold) x = next_u64();
    return x % n;
  }

  // Standard normal via Box-Muller; the second value of each pair is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - next_double();  // (0, 1]
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  // Knuth's product method; adequate for the small rates used here.
  int poisson(double lambda) {
    if (lambda <= 0.0) return 0;
    const double limit = std::exp(-lambda);
    int k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= next_double();
    } while (p > limit);
    return k - 1;
  }

  // Geometric on {1, 2, ...} with success probability p (mean 1/p).
  int geometric(double p) {
    if (p <= 0.0 || p > 1.0)
      throw Error(Errc::out_of_range, "geometric probability must be in (0, 1]");
    if (p == 1.0) return 1;
    const double u = next_double();
    const double k = std::floor(std::log1p(-u) / std::log1p(-p));
    return 1 + static_cast<int>(k);
  }

  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(uniform_int(i));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::array<std::uint64_t, 4> state_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace driftbench::numerics
