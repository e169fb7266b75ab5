#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace rsde {

/// One step of the SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Derives a child stream seed from a root seed and a list of keys
/// (replication index, sample size, component, ...).
constexpr std::uint64_t derive_seed(std::uint64_t root,
                                    std::initializer_list<std::uint64_t> keys) noexcept {
  std::uint64_t s = splitmix64(root);
  for (const std::uint64_t k : keys) s = splitmix64(s ^ splitmix64(k));
  return s;
}

/// Gaussian and uniform draws for the path simulator.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  double normal() { return gauss_(engine_); }

  /// Uniform on (0, 1].
  double uniform_open_closed() { return 1.0 - unif_(engine_); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> gauss_{0.0, 1.0};
  std::uniform_real_distribution<double> unif_{0.0, 1.0};
};

}  // namespace rsde
