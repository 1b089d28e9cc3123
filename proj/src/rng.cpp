#include "lcc/rng.hpp"

#include <cmath>

namespace lcc {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t stage_seed(std::uint64_t parent, std::string_view stage) { return mix64(parent ^ fnv1a(stage)); }

std::uint64_t stage_seed(std::uint64_t parent, std::string_view stage, std::uint64_t k) {
  return mix64(stage_seed(parent, stage) + k);
}

Rng make_rng(std::uint64_t seed) { return Rng(seed); }

// Distributions are written out by hand: the standard library leaves their
// algorithms unspecified, which would make outputs differ across platforms.
double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  if (n <= 1) return 0;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % n;
}

double normal01(Rng& rng) {
  double u = uniform01(rng);
  while (u == 0.0) u = uniform01(rng);
  const double v = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
}

}  // namespace lcc
