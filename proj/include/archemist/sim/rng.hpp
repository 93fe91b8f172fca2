#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace archemist::sim {

std::uint64_t fnv1a(std::string_view text, std::uint64_t seed = 0xcbf29ce484222325ULL);

/// Portable deterministic generator: mt19937_64 plus hand-rolled uniform/normal transforms,
/// since the standard distributions are not specified bit-for-bit across library vendors.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Stream derived from a scenario seed and a request identity.
  static Rng derive(std::uint64_t seed, std::string_view device, std::string_view key);

  double uniform();  // [0, 1)
  double normal(double mean, double sigma);

 private:
  std::mt19937_64 gen_;
};

}  // namespace archemist::sim
