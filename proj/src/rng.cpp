#include "eomp/rng.hpp"

#include <bit>
#include <cmath>

#include "eomp/errors.hpp"

namespace eomp {

Rng::Rng(const RngSpec& spec) : spec_(spec), gen_(spec.seed) {
  if (spec.algorithm != "mt19937-polar") {
    throw ParameterError("Rng: unknown algorithm id '" + spec.algorithm + "'");
  }
}

std::uint64_t Rng::uniform_below(std::uint64_t n) {
  if (n == 0) {
    throw ParameterError("uniform_below: bound must be positive");
  }
  const std::uint64_t mask = std::bit_ceil(n) - 1;
  std::uint64_t v;
  do {
    v = next_u64() & mask;
  } while (v >= n);
  return v;
}

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform01() - 1.0;
    v = 2.0 * uniform01() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * scale;
  has_spare_ = true;
  return u * scale;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001B3ULL;
  }
  return hash;
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::string_view experiment,
                          std::uint64_t trial_index) {
  std::uint64_t state = base_seed ^ fnv1a64(experiment);
  std::uint64_t mixed = splitmix64(state);
  state = mixed ^ trial_index;
  return splitmix64(state);
}

}  // namespace eomp
