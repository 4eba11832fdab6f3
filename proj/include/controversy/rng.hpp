#ifndef CONTROVERSY_RNG_HPP
#define CONTROVERSY_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace controversy {

// mt19937_64 with hand-rolled distributions. std::*_distribution output is
// implementation-defined, which would break byte-identical reruns across
// standard libraries; the engine itself is pinned by the standard.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // [0, 1)
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // [0, n); n > 0. Modulo bias is negligible for the small n used here.
  std::uint64_t uniform_int(std::uint64_t n) { return engine_() % n; }

  // [lo, hi] inclusive
  std::int64_t uniform_range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(uniform_int(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  bool bernoulli(double p) { return uniform() < p; }

  double exponential(double mean) { return -mean * std::log1p(-uniform()); }

  // Box-Muller, spare discarded so the draw count stays predictable.
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  double log_uniform(double lo, double hi) {
    return std::exp(std::log(lo) + uniform() * (std::log(hi) - std::log(lo)));
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_int(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace controversy

#endif  // CONTROVERSY_RNG_HPP
