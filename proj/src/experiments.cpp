#include "eomp/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace eomp {

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
  }
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) {
      fn(i);
    }
    return;
  }

  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(threads));
  for (int w = 0; w < threads; ++w) {
    workers.emplace_back([&, w] {
      // Static block partition: worker w owns a contiguous index range, so
      // the work assignment is independent of scheduling.
      const int lo = static_cast<int>(static_cast<long long>(count) * w / threads);
      const int hi = static_cast<int>(static_cast<long long>(count) * (w + 1) / threads);
      try {
        for (int i = lo; i < hi; ++i) {
          fn(i);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) {
          failure = std::current_exception();
        }
      }
    });
  }
  for (auto& worker : workers) {
    worker.join();
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
}

std::vector<SweepRow> aggregate_rows(const SweepResult& result) {
  std::vector<SweepRow> rows;
  std::vector<double> recovered_sum;
  std::vector<double> exact_sum;
  std::vector<int> exact_count;
  std::vector<double> residual_sq_sum;

  auto row_index = [&](double value, const std::string& algo) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].sweep_value == value && rows[i].algo == algo) {
        return i;
      }
    }
    rows.push_back(SweepRow{value, algo, 0, 0.0, -1.0, -1.0, 0.0, 0.0});
    recovered_sum.push_back(0.0);
    exact_sum.push_back(0.0);
    exact_count.push_back(0);
    residual_sq_sum.push_back(0.0);
    return rows.size() - 1;
  };

  for (const auto& record : result.records) {
    const std::size_t at = row_index(record.sweep_value, record.algo);
    rows[at].trials += 1;
    recovered_sum[at] += record.recovered_k;
    if (record.exact >= 0) {
      exact_sum[at] += record.exact;
      exact_count[at] += 1;
    }
    residual_sq_sum[at] += record.final_residual * record.final_residual;
    rows[at].total_wall_time += record.wall_time;
  }

  for (std::size_t i = 0; i < rows.size(); ++i) {
    SweepRow& row = rows[i];
    row.mean_recovered_k = row.trials > 0 ? recovered_sum[i] / row.trials : 0.0;
    row.recovery_rate = exact_count[i] > 0 ? exact_sum[i] / exact_count[i] : -1.0;
    row.mean_wall_time = row.trials > 0 ? row.total_wall_time / row.trials : 0.0;
    if (result.psnr_pixels > 0 && row.trials > 0) {
      const double mse = residual_sq_sum[i] / static_cast<double>(result.psnr_pixels);
      row.mean_psnr = 10.0 * std::log10(result.psnr_peak * result.psnr_peak / mse);
    }
  }
  return rows;
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool exact_recovery(const Dictionary& dict, const SparseSignal& truth, const Vec& y,
                    const PursuitResult& pursuit) {
  if (static_cast<int>(pursuit.support.size()) != truth.k()) {
    return false;
  }
  std::vector<int> sorted_support = pursuit.support;
  std::sort(sorted_support.begin(), sorted_support.end());
  if (sorted_support != truth.support) {
    return false;
  }
  Vec amplitudes;
  try {
    amplitudes = refit(dict, sorted_support, y);
  } catch (const SingularityError&) {
    return false;
  }
  double truth_peak = 0.0;
  for (double a : truth.amplitudes) {
    truth_peak = std::max(truth_peak, std::abs(a));
  }
  for (std::size_t i = 0; i < amplitudes.size(); ++i) {
    if (std::abs(amplitudes[i] - truth.amplitudes[i]) > 1e-5 * truth_peak) {
      return false;
    }
  }
  return true;
}

}  // namespace

SweepResult exact_recovery_sweep(const ExactRecoveryConfig& config) {
  if (config.k_values.empty() || config.trials < 1) {
    throw ParameterError("exact_recovery_sweep: need at least one k and one trial");
  }
  for (int k : config.k_values) {
    if (k < 1 || k > config.n) {
      throw ParameterError("exact_recovery_sweep: k must lie in [1, n]");
    }
  }

  SweepResult result;
  result.experiment = "exact-recovery";
  const int per_trial = static_cast<int>(config.algos.size());
  const int per_k = config.trials * per_trial;
  result.records.resize(static_cast<std::size_t>(per_k) * config.k_values.size());

  parallel_for(static_cast<int>(config.k_values.size()) * config.trials, config.threads,
               [&](int item) {
                 const int ki = item / config.trials;
                 const int trial = item % config.trials;
                 const int k = config.k_values[static_cast<std::size_t>(ki)];
                 const std::string id = "exact-recovery:k=" + std::to_string(k);
                 const std::uint64_t dict_seed =
                     derive_seed(config.base_seed, id + "/dict", static_cast<std::uint64_t>(trial));
                 const std::uint64_t signal_seed = derive_seed(
                     config.base_seed, id + "/signal", static_cast<std::uint64_t>(trial));

                 const Dictionary dict =
                     gaussian_ensemble(config.n, config.m, RngSpec{"mt19937-polar", dict_seed});
                 const SparseSignal truth =
                     k_sparse_gaussian_signal(config.m, k, RngSpec{"mt19937-polar", signal_seed});
                 const Vec y = synthesize(dict, truth);

                 // Exactly k iterations: no residual threshold, stall disabled.
                 StopRule stop;
                 stop.epsilon = 0.0;
                 stop.max_iter = k;
                 stop.stall_tol = 0.0;

                 for (int a = 0; a < per_trial; ++a) {
                   const PursuitAlgo algo = config.algos[static_cast<std::size_t>(a)];
                   const auto start = std::chrono::steady_clock::now();
                   const PursuitResult pursuit = run_pursuit(algo, dict, y, stop);
                   const double elapsed = seconds_since(start);

                   TrialRecord record;
                   record.experiment = result.experiment;
                   record.sweep_value = k;
                   record.trial = trial;
                   record.seed = dict_seed;
                   record.algo = to_string(algo);
                   record.k_true = k;
                   record.recovered_k = pursuit.iterations;
                   record.exact = exact_recovery(dict, truth, y, pursuit) ? 1 : 0;
                   record.iterations = pursuit.iterations;
                   record.final_residual = pursuit.residual_norms.back();
                   record.wall_time = elapsed;
                   result.records[static_cast<std::size_t>(ki) * per_k +
                                  static_cast<std::size_t>(trial) * per_trial +
                                  static_cast<std::size_t>(a)] = std::move(record);
                 }
               });

  result.rows = aggregate_rows(result);
  return result;
}

SweepResult recovered_sparsity_sweep(const RecoveredSparsityConfig& config) {
  if (config.k_values.empty() || config.trials < 1) {
    throw ParameterError("recovered_sparsity_sweep: need at least one k and one trial");
  }
  if (config.family == DictionaryFamily::shifted_block) {
    throw ParameterError("recovered_sparsity_sweep: gaussian and odct families only");
  }
  const int m =
      config.family == DictionaryFamily::odct ? config.redundancy * config.n : config.m;
  for (int k : config.k_values) {
    if (k < 1 || k > m) {
      throw ParameterError("recovered_sparsity_sweep: k must lie in [1, m]");
    }
  }

  // The ODCT dictionary is deterministic; build it once and share.
  Dictionary shared;
  if (config.family == DictionaryFamily::odct) {
    shared = odct_dictionary(config.n, config.redundancy);
  }

  SweepResult result;
  result.experiment = std::string("recovered-sparsity:") + to_string(config.family);
  const int per_trial = static_cast<int>(config.algos.size());
  const int per_k = config.trials * per_trial;
  result.records.resize(static_cast<std::size_t>(per_k) * config.k_values.size());

  parallel_for(static_cast<int>(config.k_values.size()) * config.trials, config.threads,
               [&](int item) {
                 const int ki = item / config.trials;
                 const int trial = item % config.trials;
                 const int k = config.k_values[static_cast<std::size_t>(ki)];
                 const std::string id = result.experiment + ":k=" + std::to_string(k);
                 const std::uint64_t dict_seed =
                     derive_seed(config.base_seed, id + "/dict", static_cast<std::uint64_t>(trial));
                 const std::uint64_t signal_seed = derive_seed(
                     config.base_seed, id + "/signal", static_cast<std::uint64_t>(trial));

                 const Dictionary dict =
                     config.family == DictionaryFamily::odct
                         ? shared
                         : gaussian_ensemble(config.n, m, RngSpec{"mt19937-polar", dict_seed},
                                             config.normalization);
                 const SparseSignal truth =
                     k_sparse_gaussian_signal(m, k, RngSpec{"mt19937-polar", signal_seed});
                 const Vec y = synthesize(dict, truth);

                 StopRule stop;
                 stop.epsilon = config.eps;
                 stop.max_iter = config.n;

                 for (int a = 0; a < per_trial; ++a) {
                   const PursuitAlgo algo = config.algos[static_cast<std::size_t>(a)];
                   const auto start = std::chrono::steady_clock::now();
                   const PursuitResult pursuit = run_pursuit(algo, dict, y, stop);
                   const double elapsed = seconds_since(start);

                   TrialRecord record;
                   record.experiment = result.experiment;
                   record.sweep_value = k;
                   record.trial = trial;
                   record.seed = signal_seed;
                   record.algo = to_string(algo);
                   record.k_true = k;
                   record.recovered_k = pursuit.iterations;
                   record.iterations = pursuit.iterations;
                   record.final_residual = pursuit.residual_norms.back();
                   record.wall_time = elapsed;
                   result.records[static_cast<std::size_t>(ki) * per_k +
                                  static_cast<std::size_t>(trial) * per_trial +
                                  static_cast<std::size_t>(a)] = std::move(record);
                 }
               });

  result.rows = aggregate_rows(result);
  return result;
}

namespace {

struct BlockGrid {
  std::vector<BlockSpec> blocks;
  int origin_lo_r = 0;
};

// Largest grid of non-overlapping blocks whose search windows stay inside the
// frame. Starts at the first legal origin.
BlockGrid coded_block_grid(int h, int w, int block, const SearchRange& search) {
  BlockGrid grid;
  const int first_r = std::max(0, -search.lo);
  const int first_c = std::max(0, -search.lo);
  const int last_r = h - block - std::max(0, search.hi);
  const int last_c = w - block - std::max(0, search.hi);
  for (int r = first_r; r <= last_r; r += block) {
    for (int c = first_c; c <= last_c; c += block) {
      grid.blocks.push_back(BlockSpec{r, c, block, block});
    }
  }
  return grid;
}

}  // namespace

SweepResult psnr_vs_k_experiment(const PsnrExperimentConfig& config) {
  if (config.reference.rows() != config.target.rows() ||
      config.reference.cols() != config.target.cols()) {
    throw ParameterError("psnr_vs_k_experiment: frame sizes differ");
  }
  if (config.block < 1 || config.eps_rel.empty() || config.algos.empty()) {
    throw ParameterError("psnr_vs_k_experiment: need a block size, eps grid and algorithms");
  }

  const BlockGrid grid =
      coded_block_grid(config.target.rows(), config.target.cols(), config.block, config.search);
  if (grid.blocks.empty()) {
    throw ParameterError("psnr_vs_k_experiment: frame too small for one block plus search margin");
  }

  double peak = config.peak;
  if (peak <= 0.0) {
    for (int j = 0; j < config.reference.cols(); ++j) {
      for (double v : config.reference.col(j)) {
        peak = std::max(peak, v);
      }
    }
  }

  const int blocks = static_cast<int>(grid.blocks.size());

  // Dictionaries are shared across the eps sweep and both algorithms.
  std::vector<Dictionary> dictionaries(grid.blocks.size());
  parallel_for(blocks, config.threads, [&](int b) {
    dictionaries[static_cast<std::size_t>(b)] =
        shifted_block_dictionary(config.reference, grid.blocks[static_cast<std::size_t>(b)],
                                 config.search);
  });

  SweepResult result;
  result.experiment = "psnr-k";
  result.psnr_peak = peak;
  result.psnr_pixels = static_cast<std::int64_t>(blocks) * config.block * config.block;

  const int per_eps = static_cast<int>(config.algos.size()) * blocks;
  result.records.resize(static_cast<std::size_t>(per_eps) * config.eps_rel.size());

  parallel_for(
      static_cast<int>(result.records.size()), config.threads, [&](int item) {
        const int ei = item / per_eps;
        const int a = (item % per_eps) / blocks;
        const int b = item % blocks;
        const double eps_rel = config.eps_rel[static_cast<std::size_t>(ei)];
        const PursuitAlgo algo = config.algos[static_cast<std::size_t>(a)];
        const BlockSpec& block = grid.blocks[static_cast<std::size_t>(b)];
        const Dictionary& dict = dictionaries[static_cast<std::size_t>(b)];

        // Blocks are coded mean-removed; the mean rides along separately.
        Vec y(static_cast<std::size_t>(config.block) * config.block);
        int p = 0;
        for (int i = 0; i < block.height; ++i) {
          for (int j = 0; j < block.width; ++j, ++p) {
            y[static_cast<std::size_t>(p)] = config.target(block.row + i, block.col + j);
          }
        }
        double mean = 0.0;
        for (double v : y) {
          mean += v;
        }
        mean /= static_cast<double>(y.size());
        for (double& v : y) {
          v -= mean;
        }
        const double y_norm = norm2(y);

        TrialRecord record;
        record.experiment = result.experiment;
        record.sweep_value = eps_rel;
        record.trial = b;
        record.algo = to_string(algo);
        if (y_norm == 0.0) {
          record.flag = "flat-block";
        } else {
          StopRule stop;
          stop.epsilon = eps_rel * y_norm;
          const auto start = std::chrono::steady_clock::now();
          const PursuitResult pursuit = run_pursuit(algo, dict, y, stop);
          record.wall_time = seconds_since(start);
          record.recovered_k = pursuit.iterations;
          record.iterations = pursuit.iterations;
          record.final_residual = pursuit.residual_norms.back();
          if (pursuit.termination == Termination::exhausted_atoms && pursuit.iterations == 0) {
            record.flag = "degenerate-dictionary";
          }
        }
        result.records[static_cast<std::size_t>(item)] = std::move(record);
      });

  result.rows = aggregate_rows(result);
  return result;
}

SweepResult runtime_benchmark(const BenchConfig& config) {
  if (config.k_values.empty() || config.trials < 1) {
    throw ParameterError("runtime_benchmark: need at least one k and one trial");
  }
  const Dictionary dict = odct_dictionary(config.n, config.redundancy);
  const int m = dict.m();
  const std::vector<PursuitAlgo> algos{PursuitAlgo::omp_ls, PursuitAlgo::omp, PursuitAlgo::eomp};

  SweepResult result;
  result.experiment = "bench";

  StopRule stop;
  stop.epsilon = config.eps;
  stop.max_iter = config.n;

  // Strictly sequential; only the solver call is inside the timer.
  for (int k : config.k_values) {
    const std::string id = "bench:k=" + std::to_string(k);
    for (int trial = -config.warmup; trial < config.trials; ++trial) {
      const bool warm = trial < 0;
      const std::string tag = warm ? id + "/warmup" : id;
      const std::uint64_t signal_seed = derive_seed(
          config.base_seed, tag + "/signal", static_cast<std::uint64_t>(warm ? -trial : trial));
      const SparseSignal truth =
          k_sparse_gaussian_signal(m, k, RngSpec{"mt19937-polar", signal_seed});
      const Vec y = synthesize(dict, truth);
      for (PursuitAlgo algo : algos) {
        const auto start = std::chrono::steady_clock::now();
        const PursuitResult pursuit = run_pursuit(algo, dict, y, stop);
        const double elapsed = seconds_since(start);
        if (warm) {
          continue;
        }
        TrialRecord record;
        record.experiment = result.experiment;
        record.sweep_value = k;
        record.trial = trial;
        record.seed = signal_seed;
        record.algo = to_string(algo);
        record.k_true = k;
        record.recovered_k = pursuit.iterations;
        record.iterations = pursuit.iterations;
        record.final_residual = pursuit.residual_norms.back();
        record.wall_time = elapsed;
        result.records.push_back(std::move(record));
      }
    }
  }

  result.rows = aggregate_rows(result);
  return result;
}

double eomp_over_omp_ratio(const SweepResult& bench, double k_value) {
  double omp_total = -1.0;
  double eomp_total = -1.0;
  for (const auto& row : bench.rows) {
    if (row.sweep_value == k_value && row.algo == "omp") {
      omp_total = row.total_wall_time;
    }
    if (row.sweep_value == k_value && row.algo == "eomp") {
      eomp_total = row.total_wall_time;
    }
  }
  if (omp_total <= 0.0 || eomp_total <= 0.0) {
    throw ParameterError("eomp_over_omp_ratio: no timing rows for k=" + std::to_string(k_value));
  }
  return eomp_total / omp_total;
}

ComplexityCount complexity_model(int n, int m, int s) {
  if (n < 1 || m < 1 || s < 1) {
    throw ParameterError("complexity_model: n, m, s must be positive");
  }
  if (s > std::min(n, m)) {
    throw ParameterError("complexity_model: s cannot exceed min(n, m)");
  }
  const double kd = m;  // dictionary size plays the K role in the closed forms
  const double sd = s;
  const double nd = n;
  ComplexityCount count;
  count.omp_multiplies = ((2.0 * kd - sd + 7.0) * sd / 2.0 + sd * (sd - 1.0)) * nd;
  count.eomp_multiplies =
      ((2.0 * kd - sd + 5.0) * sd / 2.0 + 2.0 * (2.0 * kd - sd) * (sd - 1.0)) * nd;
  count.ratio = count.eomp_multiplies / count.omp_multiplies;
  return count;
}

std::vector<double> geometric_eps_grid(double hi, double lo, int points) {
  if (hi <= 0.0 || lo <= 0.0 || lo > hi) {
    throw ParameterError("geometric_eps_grid: need 0 < lo <= hi");
  }
  if (points < 1) {
    throw ParameterError("geometric_eps_grid: need at least one point");
  }
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(points));
  if (points == 1) {
    grid.push_back(hi);
    return grid;
  }
  const double step = std::pow(lo / hi, 1.0 / (points - 1));
  double value = hi;
  for (int i = 0; i < points; ++i) {
    grid.push_back(value);
    value *= step;
  }
  grid.back() = lo;  // pin the endpoint against accumulated rounding
  return grid;
}

}  // namespace eomp
