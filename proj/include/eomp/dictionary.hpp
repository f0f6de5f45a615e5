#pragma once

#include <string>
#include <utility>
#include <vector>

#include "eomp/linalg.hpp"
#include "eomp/rng.hpp"

namespace eomp {

enum class DictionaryFamily { gaussian, odct, shifted_block };
enum class Normalization { unit_l2, raw };

const char* to_string(DictionaryFamily family);

// N x M matrix of column atoms with normalization metadata. Atoms flagged
// degenerate (flat source blocks) stay in place so indices keep their meaning,
// but solvers never select them.
struct Dictionary {
  Mat atoms;
  DictionaryFamily family = DictionaryFamily::gaussian;
  Normalization normalization = Normalization::unit_l2;
  std::string provenance;
  std::vector<char> degenerate;  // empty means no atom is flagged

  int n() const { return atoms.rows(); }
  int m() const { return atoms.cols(); }
  bool is_degenerate(int j) const {
    return !degenerate.empty() && degenerate[static_cast<std::size_t>(j)] != 0;
  }
};

// Ground truth for synthetic trials: k distinct indices (ascending) with
// nonzero amplitudes.
struct SparseSignal {
  int length = 0;
  std::vector<int> support;
  std::vector<double> amplitudes;

  int k() const { return static_cast<int>(support.size()); }
  Vec dense() const;
};

// i.i.d. standard normal entries, columns scaled to unit L2 norm. Passing
// Normalization::raw leaves the columns as drawn (zero mean, unit variance),
// which is how the recovered-sparsity study can match the classic convention.
Dictionary gaussian_ensemble(int n, int m, const RngSpec& rng,
                             Normalization normalization = Normalization::unit_l2);

// Overcomplete cosine frame with M = redundancy * n atoms: atom j has entries
// cos(pi * (i + 0.5) * j / M), mean-removed for j >= 1, unit-normalized.
// Deterministic, no RNG.
Dictionary odct_dictionary(int n, int redundancy);

SparseSignal k_sparse_gaussian_signal(int m, int k, const RngSpec& rng);

// Sum of amplitude_j * atom_j over the support.
Vec synthesize(const Dictionary& dict, const SparseSignal& signal);

struct BlockSpec {
  int row = 0;
  int col = 0;
  int height = 0;
  int width = 0;
};

// Inclusive shift range; the dictionary holds one atom per (dr, dc) pair in
// lexicographic order, (hi - lo + 1)^2 atoms total.
struct SearchRange {
  int lo = 0;
  int hi = 0;
  int count() const { return hi - lo + 1; }
};

// One atom per shift: the block at (row+dr, col+dc) of the reference frame,
// flattened row-major, mean-removed and unit-normalized. Flat blocks
// (pre-normalization norm < 1e-10) are kept but flagged degenerate.
Dictionary shifted_block_dictionary(const Mat& reference, const BlockSpec& block,
                                    const SearchRange& search);

// Reference: seeded random texture on [0, 255] smoothed with a 5x5 moving
// average. Target: reference translated by (shift_r, shift_c) plus i.i.d.
// Gaussian noise. Both frames are h x w crops of one larger texture, so the
// translation is exact everywhere including borders.
std::pair<Mat, Mat> synthetic_frame_pair(int h, int w, int shift_r, int shift_c,
                                         double noise_sigma, const RngSpec& rng);

}  // namespace eomp
