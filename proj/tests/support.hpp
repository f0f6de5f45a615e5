#pragma once

#include <cstdint>

// Summation-loop oracles for the closed-form multiply counts: per-iteration
// costs accumulated term by term, before any algebraic simplification.
// OMP iteration t: correlation scan over the remaining atoms (K-t+1 inner
// products), Gram-Schmidt projection against t-1 basis columns (2 products
// each), plus normalization, coefficient and residual update (3).
// eOMP iteration t: the same scan, a 4-product one-step orthonormalization of
// every remaining atom from the second iteration on, plus coefficient and
// residual update (2).
inline std::int64_t omp_multiplies_loop(std::int64_t k, std::int64_t n, std::int64_t s) {
  std::int64_t total = 0;
  for (std::int64_t t = 1; t <= s; ++t) {
    total += ((k - t + 1) + 2 * (t - 1) + 3) * n;
  }
  return total;
}

inline std::int64_t eomp_multiplies_loop(std::int64_t k, std::int64_t n, std::int64_t s) {
  std::int64_t total = 0;
  for (std::int64_t t = 1; t <= s; ++t) {
    std::int64_t sweep = t >= 2 ? 4 * (k - t + 1) : 0;
    total += ((k - t + 1) + sweep + 2) * n;
  }
  return total;
}
