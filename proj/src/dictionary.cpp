#include "eomp/dictionary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace eomp {

const char* to_string(DictionaryFamily family) {
  switch (family) {
    case DictionaryFamily::gaussian: return "gaussian";
    case DictionaryFamily::odct: return "odct";
    case DictionaryFamily::shifted_block: return "shifted-block";
  }
  return "?";
}

Vec SparseSignal::dense() const {
  Vec out(static_cast<std::size_t>(length), 0.0);
  for (std::size_t i = 0; i < support.size(); ++i) {
    out[static_cast<std::size_t>(support[i])] = amplitudes[i];
  }
  return out;
}

namespace {

void normalize_column(std::span<double> column) {
  const double n = norm2(column);
  for (double& v : column) {
    v /= n;
  }
}

double mean_of(std::span<const double> v) {
  double acc = 0.0;
  for (double e : v) {
    acc += e;
  }
  return acc / static_cast<double>(v.size());
}

}  // namespace

Dictionary gaussian_ensemble(int n, int m, const RngSpec& rng_spec,
                             Normalization normalization) {
  if (n < 1) {
    throw ParameterError("gaussian_ensemble: n must be at least 1");
  }
  if (m < n) {
    throw ParameterError("gaussian_ensemble: m (" + std::to_string(m) +
                         ") must be at least n (" + std::to_string(n) + ")");
  }
  Rng rng(rng_spec);
  Dictionary dict;
  dict.atoms = Mat(n, m);
  dict.family = DictionaryFamily::gaussian;
  dict.normalization = normalization;
  dict.provenance = rng_spec.algorithm + ":" + std::to_string(rng_spec.seed);
  for (int j = 0; j < m; ++j) {
    auto column = dict.atoms.col(j);
    for (double& v : column) {
      v = rng.gaussian();
    }
    if (normalization == Normalization::unit_l2) {
      normalize_column(column);
    }
  }
  return dict;
}

Dictionary odct_dictionary(int n, int redundancy) {
  if (n < 2) {
    throw ParameterError("odct_dictionary: n must be at least 2");
  }
  if (redundancy < 2) {
    throw ParameterError("odct_dictionary: redundancy must be at least 2");
  }
  const int m = redundancy * n;
  Dictionary dict;
  dict.atoms = Mat(n, m);
  dict.family = DictionaryFamily::odct;
  dict.normalization = Normalization::unit_l2;
  dict.provenance = "odct:" + std::to_string(redundancy) + "x";
  for (int j = 0; j < m; ++j) {
    auto column = dict.atoms.col(j);
    for (int i = 0; i < n; ++i) {
      column[static_cast<std::size_t>(i)] =
          std::cos(std::numbers::pi * (i + 0.5) * j / static_cast<double>(m));
    }
    if (j >= 1) {
      const double mu = mean_of(column);
      for (double& v : column) {
        v -= mu;
      }
    }
    const double remaining = norm2(column);
    if (remaining < 1e-12) {
      throw ConstructionError("odct_dictionary: atom " + std::to_string(j) +
                              " degenerates after mean removal");
    }
    normalize_column(column);
  }
  return dict;
}

SparseSignal k_sparse_gaussian_signal(int m, int k, const RngSpec& rng_spec) {
  if (k < 1 || k > m) {
    throw ParameterError("k_sparse_gaussian_signal: need 1 <= k <= m, got k=" +
                         std::to_string(k) + ", m=" + std::to_string(m));
  }
  Rng rng(rng_spec);

  // Partial Fisher-Yates over [0, m) gives the support without replacement.
  std::vector<int> pool(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    pool[static_cast<std::size_t>(i)] = i;
  }
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(m - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }

  SparseSignal signal;
  signal.length = m;
  signal.support.assign(pool.begin(), pool.begin() + k);
  std::sort(signal.support.begin(), signal.support.end());
  signal.amplitudes.resize(static_cast<std::size_t>(k));
  for (double& a : signal.amplitudes) {
    do {
      a = rng.gaussian();
    } while (a == 0.0);
  }
  return signal;
}

Vec synthesize(const Dictionary& dict, const SparseSignal& signal) {
  if (signal.length != dict.m()) {
    throw ParameterError("synthesize: signal length " + std::to_string(signal.length) +
                         " does not match atom count " + std::to_string(dict.m()));
  }
  Vec y(static_cast<std::size_t>(dict.n()), 0.0);
  for (std::size_t i = 0; i < signal.support.size(); ++i) {
    axpy_inplace(signal.amplitudes[i], dict.atoms.col(signal.support[i]), y);
  }
  return y;
}

Dictionary shifted_block_dictionary(const Mat& reference, const BlockSpec& block,
                                    const SearchRange& search) {
  if (block.height < 1 || block.width < 1) {
    throw ParameterError("shifted_block_dictionary: block must be at least 1x1");
  }
  if (search.hi < search.lo) {
    throw ParameterError("shifted_block_dictionary: empty search range");
  }
  const int row_lo = block.row + search.lo;
  const int col_lo = block.col + search.lo;
  const int row_hi = block.row + search.hi + block.height;
  const int col_hi = block.col + search.hi + block.width;
  if (row_lo < 0 || col_lo < 0 || row_hi > reference.rows() || col_hi > reference.cols()) {
    throw ParameterError("shifted_block_dictionary: shift range leaves the frame (rows " +
                         std::to_string(row_lo) + ".." + std::to_string(row_hi) + ", cols " +
                         std::to_string(col_lo) + ".." + std::to_string(col_hi) + ")");
  }

  const int side = search.count();
  const int m = side * side;
  const int n = block.height * block.width;
  Dictionary dict;
  dict.atoms = Mat(n, m);
  dict.family = DictionaryFamily::shifted_block;
  dict.normalization = Normalization::unit_l2;
  dict.provenance = "shifted-block:origin=" + std::to_string(block.row) + "," +
                    std::to_string(block.col) + ";search=" + std::to_string(search.lo) + ".." +
                    std::to_string(search.hi);
  dict.degenerate.assign(static_cast<std::size_t>(m), 0);

  int atom = 0;
  for (int dr = search.lo; dr <= search.hi; ++dr) {
    for (int dc = search.lo; dc <= search.hi; ++dc, ++atom) {
      auto column = dict.atoms.col(atom);
      int p = 0;
      for (int i = 0; i < block.height; ++i) {
        for (int j = 0; j < block.width; ++j, ++p) {
          column[static_cast<std::size_t>(p)] = reference(block.row + dr + i, block.col + dc + j);
        }
      }
      const double mu = mean_of(column);
      for (double& v : column) {
        v -= mu;
      }
      const double remaining = norm2(column);
      if (remaining < 1e-10) {
        // Flat block: keep the (near-zero) column so atom index still maps to
        // its shift, but never let selection touch it.
        dict.degenerate[static_cast<std::size_t>(atom)] = 1;
      } else {
        normalize_column(column);
      }
    }
  }
  return dict;
}

std::pair<Mat, Mat> synthetic_frame_pair(int h, int w, int shift_r, int shift_c,
                                         double noise_sigma, const RngSpec& rng_spec) {
  if (h < 1 || w < 1) {
    throw ParameterError("synthetic_frame_pair: frame must be at least 1x1");
  }
  if (noise_sigma < 0.0) {
    throw ParameterError("synthetic_frame_pair: noise_sigma must be nonnegative");
  }
  Rng rng(rng_spec);

  // Both frames crop one larger texture so the translation is exact
  // everywhere; the pad absorbs the shift.
  const int pad = std::max(std::abs(shift_r), std::abs(shift_c));
  const int big_h = h + 2 * pad;
  const int big_w = w + 2 * pad;
  Mat field(big_h, big_w);
  for (int i = 0; i < big_h; ++i) {
    for (int j = 0; j < big_w; ++j) {
      field(i, j) = 255.0 * rng.uniform01();
    }
  }

  // 5x5 moving average, window clamped at the texture border.
  Mat texture(big_h, big_w);
  for (int i = 0; i < big_h; ++i) {
    for (int j = 0; j < big_w; ++j) {
      double acc = 0.0;
      int count = 0;
      for (int di = -2; di <= 2; ++di) {
        for (int dj = -2; dj <= 2; ++dj) {
          const int r = i + di;
          const int c = j + dj;
          if (r >= 0 && r < big_h && c >= 0 && c < big_w) {
            acc += field(r, c);
            ++count;
          }
        }
      }
      texture(i, j) = acc / count;
    }
  }

  Mat reference(h, w);
  Mat target(h, w);
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      reference(i, j) = texture(pad + i, pad + j);
    }
  }
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      const double noise = noise_sigma > 0.0 ? noise_sigma * rng.gaussian() : 0.0;
      target(i, j) = texture(pad + i - shift_r, pad + j - shift_c) + noise;
    }
  }
  return {std::move(reference), std::move(target)};
}

}  // namespace eomp
