#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace setpredict {

// Deterministic random stream. Every run of the project draws all of its
// randomness from one 64-bit seed through instances of this class, so two
// runs with the same seed produce bit-identical results on any platform.
//
// The algorithm is pinned: std::mt19937_64 (its output sequence is fixed by
// the C++ standard), seeded through splitmix64. Named child streams are
// derived with split(), which hashes the stream name (FNV-1a) into the
// parent's root seed. Gaussians use Box-Muller on top of the pinned uniform
// draws; std::normal_distribution is avoided because its algorithm is
// implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Independent child stream identified by name. Does not consume state.
  Rng split(std::string_view name) const;

  std::uint64_t next_u64();
  // Uniform on [0, 1), 53-bit resolution.
  double uniform();
  // Uniform on [lo, hi).
  double uniform(double lo, double hi);
  // Uniform integer in [0, n), n >= 1. Rejection sampling, unbiased.
  std::uint64_t uniform_int(std::uint64_t n);
  // Standard normal.
  double normal();

  std::uint64_t root_seed() const { return root_seed_; }

 private:
  std::uint64_t root_seed_;
  std::mt19937_64 engine_;
  bool have_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view s);

}  // namespace setpredict
