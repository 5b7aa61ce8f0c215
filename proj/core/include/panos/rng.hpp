#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace panos {

/// Seeded RNG with a fixed draw order. All stochastic parts of the pipeline
/// go through this wrapper so that runs are reproducible bit-for-bit.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  double uniform(double lo, double hi) {
    // 53-bit mantissa fill; avoids distribution objects whose draw counts
    // are implementation-defined.
    const double u = (engine_() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
  }

  /// Standard normal via Box-Muller (one value per call, spare cached).
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform(0.0, 1.0);
    double u2 = uniform(0.0, 1.0);
    if (u1 < 1e-300) u1 = 1e-300;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  /// Fisher-Yates permutation of {0..n-1}.
  template <typename IndexVec>
  void shuffle_indices(IndexVec& idx) {
    for (std::size_t i = idx.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(engine_() % i);
      std::swap(idx[i - 1], idx[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace panos
