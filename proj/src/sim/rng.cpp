#include "archemist/sim/rng.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace archemist::sim {

std::uint64_t fnv1a(std::string_view text, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Rng Rng::derive(std::uint64_t seed, std::string_view device, std::string_view key) {
  std::string material = std::to_string(seed);
  material += '|';
  material += device;
  material += '|';
  material += key;
  return Rng(fnv1a(material));
}

double Rng::uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

double Rng::normal(double mean, double sigma) {
  if (sigma == 0.0) return mean;
  double u1 = uniform();
  double u2 = uniform();
  if (u1 < 1e-300) u1 = 1e-300;
  double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  return mean + sigma * z;
}

}  // namespace archemist::sim
