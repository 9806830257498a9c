#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <random>

namespace mupo {

// Raw mt19937_64 output plus hand-rolled draws below; the standard
// distribution objects are not bit-portable across library implementations.

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t hash_mix(std::uint64_t h, std::uint64_t v) {
  std::uint64_t s = v;
  return h ^ (splitmix64(s) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
}

/// Independent deterministic stream for (seed, stream, a, b).
inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0,
                                std::uint64_t a = 0, std::uint64_t b = 0) {
  std::uint64_t h = hash_mix(0x853c49e6748fea9bull, seed);
  h = hash_mix(h, stream);
  h = hash_mix(h, a);
  h = hash_mix(h, b);
  return std::mt19937_64(h);
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(double p, std::mt19937_64& gen) { return uniform01(gen) < p; }

/// Inverse-CDF draw from an unnormalized non-negative weight vector.
inline int sample_categorical(const Eigen::VectorXd& weights, std::mt19937_64& gen) {
  const double total = weights.sum();
  double u = uniform01(gen) * total;
  for (int i = 0; i < weights.size(); ++i) {
    u -= weights[i];
    if (u < 0.0) return i;
  }
  return static_cast<int>(weights.size()) - 1;
}

}  // namespace mupo
