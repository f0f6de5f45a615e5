#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace eomp {

// Names a reproducible random stream. The same (algorithm, seed) pair yields
// the identical stream on every platform and run: mt19937-64 is fully pinned
// by the standard, and the uniform->double and uniform->gaussian transforms
// below are fixed for the lifetime of this repository.
struct RngSpec {
  std::string algorithm = "mt19937-polar";
  std::uint64_t seed = 0;
};

class Rng {
 public:
  explicit Rng(const RngSpec& spec);
  explicit Rng(std::uint64_t seed) : Rng(RngSpec{"mt19937-polar", seed}) {}

  std::uint64_t next_u64() { return gen_(); }

  // [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Unbiased integer in [0, n) by bitmask rejection.
  std::uint64_t uniform_below(std::uint64_t n);

  // Standard normal deviate, Marsaglia polar method (one spare cached).
  double gaussian();

  const RngSpec& spec() const { return spec_; }

 private:
  RngSpec spec_;
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t fnv1a64(std::string_view text);

// Per-trial seed derived from (base seed, experiment id, trial index) via
// splitmix64 steps, so the execution order of trials cannot change any stream.
std::uint64_t derive_seed(std::uint64_t base_seed, std::string_view experiment,
                          std::uint64_t trial_index);

}  // namespace eomp
