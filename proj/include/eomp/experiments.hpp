#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eomp/dictionary.hpp"
#include "eomp/pursuit.hpp"

namespace eomp {

// One experiment outcome row. exact is -1 when exact recovery is undefined
// for the experiment (no planted signal). wall_time is only meaningful for
// the runtime benchmark; deterministic outputs never serialize it.
struct TrialRecord {
  std::string experiment;
  double sweep_value = 0.0;  // k or relative eps
  int trial = 0;
  std::uint64_t seed = 0;
  std::string algo;
  int k_true = -1;
  int recovered_k = 0;
  int exact = -1;
  int iterations = 0;
  double final_residual = 0.0;
  double wall_time = 0.0;
  std::string flag;  // e.g. "flat-block", "degenerate-dictionary"
};

struct SweepRow {
  double sweep_value = 0.0;
  std::string algo;
  int trials = 0;
  double mean_recovered_k = 0.0;
  double recovery_rate = -1.0;  // -1 when undefined
  double mean_psnr = -1.0;      // -1 unless a PSNR experiment
  double mean_wall_time = 0.0;
  double total_wall_time = 0.0;
};

struct SweepResult {
  std::string experiment;
  std::vector<TrialRecord> records;
  std::vector<SweepRow> rows;
  // PSNR context, set by the block-coding experiment so aggregates can be
  // recomputed exactly from the records.
  double psnr_peak = 0.0;
  std::int64_t psnr_pixels = 0;
};

// Recomputes aggregate rows from the records, grouped by (sweep_value, algo)
// in first-appearance order. The experiments use this themselves, so stored
// rows always match a recomputation.
std::vector<SweepRow> aggregate_rows(const SweepResult& result);

struct ExactRecoveryConfig {
  int n = 64;
  int m = 128;
  std::vector<int> k_values;
  int trials = 100;
  std::uint64_t base_seed = 0;
  std::vector<PursuitAlgo> algos{PursuitAlgo::omp, PursuitAlgo::eomp};
  int threads = 0;  // 0 = hardware concurrency
};

// Fresh Gaussian ensemble and planted k-sparse signal per trial; both
// algorithms run exactly k iterations on the same instance, then refit.
// Exact recovery means equal support sets and max-norm amplitude agreement
// within 1e-5 relative.
SweepResult exact_recovery_sweep(const ExactRecoveryConfig& config);

struct RecoveredSparsityConfig {
  DictionaryFamily family = DictionaryFamily::gaussian;
  int n = 128;
  int m = 256;        // gaussian family
  int redundancy = 2; // odct family
  std::vector<int> k_values;
  int trials = 100;
  double eps = 1e-5;
  std::uint64_t base_seed = 0;
  std::vector<PursuitAlgo> algos{PursuitAlgo::omp, PursuitAlgo::eomp};
  // Gaussian family only: raw keeps unit-variance columns as drawn.
  Normalization normalization = Normalization::unit_l2;
  int threads = 0;
};

// Pursuit until the residual reaches eps (max n iterations); the support size
// at termination is the recovered sparsity.
SweepResult recovered_sparsity_sweep(const RecoveredSparsityConfig& config);

struct PsnrExperimentConfig {
  Mat reference;
  Mat target;
  int block = 8;
  SearchRange search{-7, 7};
  std::vector<double> eps_rel;  // relative thresholds, converted per block
  std::vector<PursuitAlgo> algos{PursuitAlgo::omp, PursuitAlgo::eomp};
  double peak = 0.0;  // 0 = max reference intensity
  int threads = 0;
};

// Codes every block of the largest centered grid whose search windows stay in
// bounds. Blocks are coded mean-removed; reconstruction is basis * z + mean.
// PSNR is recomputable from the per-block final residuals.
SweepResult psnr_vs_k_experiment(const PsnrExperimentConfig& config);

struct BenchConfig {
  int n = 128;
  int redundancy = 2;
  std::vector<int> k_values;
  int trials = 100;
  int warmup = 3;
  double eps = 1e-5;
  std::uint64_t base_seed = 0;
};

// Wall-clock time of the solver calls only, strictly sequential, on the 2x
// overcomplete DCT configuration. Rows carry total and mean times per
// (k, algo); eomp_over_omp_ratio reads the ratio back out.
SweepResult runtime_benchmark(const BenchConfig& config);

double eomp_over_omp_ratio(const SweepResult& bench, double k_value);

struct ComplexityCount {
  double omp_multiplies = 0.0;
  double eomp_multiplies = 0.0;
  double ratio = 0.0;  // eomp / omp
};

// Closed-form multiply counts for s iterations on an n x m dictionary.
ComplexityCount complexity_model(int n, int m, int s);

// Geometric grid of `points` relative thresholds from hi down to lo.
std::vector<double> geometric_eps_grid(double hi, double lo, int points);

// Deterministic helper used by the experiments: fn(i) for i in [0, count),
// distributed over `threads` workers (0 = hardware concurrency). Results must
// be written into caller-owned slots indexed by i.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

}  // namespace eomp
