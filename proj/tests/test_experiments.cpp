#include <atomic>
#include <cmath>

#include "doctest.h"
#include "eomp/experiments.hpp"
#include "support.hpp"

using namespace eomp;

namespace {

bool records_equal(const std::vector<TrialRecord>& a, const std::vector<TrialRecord>& b) {
  if (a.size() != b.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    // Everything except wall_time must match bit for bit.
    if (a[i].experiment != b[i].experiment || a[i].sweep_value != b[i].sweep_value ||
        a[i].trial != b[i].trial || a[i].seed != b[i].seed || a[i].algo != b[i].algo ||
        a[i].k_true != b[i].k_true || a[i].recovered_k != b[i].recovered_k ||
        a[i].exact != b[i].exact || a[i].iterations != b[i].iterations ||
        a[i].final_residual != b[i].final_residual || a[i].flag != b[i].flag) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("complexity model: worked single-iteration example") {
  const ComplexityCount count = complexity_model(128, 256, 1);
  CHECK(count.omp_multiplies == 33152.0);
  CHECK(count.eomp_multiplies == 33024.0);
  CHECK(count.ratio == doctest::Approx(33024.0 / 33152.0).epsilon(1e-12));
}

TEST_CASE("complexity model: matches the summation-loop oracle on a grid") {
  for (int ki = 1; ki <= 10; ++ki) {
    for (int ni = 1; ni <= 10; ++ni) {
      for (int si = 1; si <= 10; ++si) {
        const int m = 16 * ki;
        const int n = 8 * ni;
        const int s = std::max(1, std::min(n, m) * si / 10);
        const ComplexityCount count = complexity_model(n, m, s);
        CHECK(count.omp_multiplies == static_cast<double>(omp_multiplies_loop(m, n, s)));
        CHECK(count.eomp_multiplies == static_cast<double>(eomp_multiplies_loop(m, n, s)));
      }
    }
  }
}

TEST_CASE("complexity model: ratio approaches 5 when the dictionary dwarfs the sparsity") {
  const ComplexityCount count = complexity_model(1000, 1000000, 100);
  CHECK(count.ratio == doctest::Approx(5.0).epsilon(0.02));
}

TEST_CASE("complexity model: validation") {
  CHECK_THROWS_AS(complexity_model(8, 16, 9), ParameterError);
  CHECK_THROWS_AS(complexity_model(0, 16, 1), ParameterError);
}

TEST_CASE("geometric eps grid") {
  const std::vector<double> grid = geometric_eps_grid(1e-1, 1e-4, 8);
  REQUIRE(grid.size() == 8);
  CHECK(grid.front() == 1e-1);
  CHECK(grid.back() == 1e-4);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    CHECK(grid[i] < grid[i - 1]);
    CHECK(grid[i] / grid[i - 1] ==
          doctest::Approx(std::pow(1e-3, 1.0 / 7.0)).epsilon(1e-10));
  }
  CHECK(geometric_eps_grid(1e-2, 1e-2, 1) == std::vector<double>{1e-2});
  CHECK_THROWS_AS(geometric_eps_grid(1e-4, 1e-1, 8), ParameterError);
}

TEST_CASE("parallel_for: covers every index once and propagates exceptions") {
  std::vector<std::atomic<int>> hits(64);
  parallel_for(64, 4, [&](int i) { hits[static_cast<std::size_t>(i)]++; });
  for (const auto& h : hits) {
    CHECK(h.load() == 1);
  }
  CHECK_THROWS_AS(
      parallel_for(8, 2, [](int i) { if (i == 5) throw ParameterError("boom"); }),
      ParameterError);
}

TEST_CASE("exact recovery sweep: trivial sparsity recovers always") {
  ExactRecoveryConfig config;
  config.n = 16;
  config.m = 32;
  config.k_values = {1, 2};
  config.trials = 10;
  config.base_seed = 3;
  config.threads = 1;
  const SweepResult result = exact_recovery_sweep(config);
  REQUIRE(result.rows.size() == 4);
  for (const auto& row : result.rows) {
    if (row.sweep_value == 1.0) {
      CHECK(row.recovery_rate == 1.0);
    }
    CHECK(row.trials == 10);
  }
  // Aggregates must be recomputable from the records exactly.
  const auto recomputed = aggregate_rows(result);
  REQUIRE(recomputed.size() == result.rows.size());
  for (std::size_t i = 0; i < recomputed.size(); ++i) {
    CHECK(recomputed[i].mean_recovered_k == result.rows[i].mean_recovered_k);
    CHECK(recomputed[i].recovery_rate == result.rows[i].recovery_rate);
    CHECK(recomputed[i].trials == result.rows[i].trials);
  }
}

TEST_CASE("exact recovery sweep: k at the ambient dimension cannot disambiguate") {
  ExactRecoveryConfig config;
  config.n = 16;
  config.m = 32;
  config.k_values = {16};
  config.trials = 10;
  config.base_seed = 7;
  config.threads = 1;
  const SweepResult result = exact_recovery_sweep(config);
  for (const auto& row : result.rows) {
    CHECK(row.recovery_rate <= 0.2);
  }
}

TEST_CASE("exact recovery sweep: identical records regardless of thread count") {
  ExactRecoveryConfig config;
  config.n = 16;
  config.m = 32;
  config.k_values = {2, 4};
  config.trials = 8;
  config.base_seed = 11;
  config.threads = 1;
  const SweepResult serial = exact_recovery_sweep(config);
  config.threads = 4;
  const SweepResult parallel = exact_recovery_sweep(config);
  CHECK(records_equal(serial.records, parallel.records));
}

TEST_CASE("recovered sparsity sweep: trivial and planted cases") {
  RecoveredSparsityConfig config;
  config.family = DictionaryFamily::gaussian;
  config.n = 32;
  config.m = 64;
  config.k_values = {1, 4};
  config.trials = 6;
  config.base_seed = 5;
  config.threads = 1;
  const SweepResult result = recovered_sparsity_sweep(config);
  for (const auto& row : result.rows) {
    if (row.sweep_value == 1.0) {
      CHECK(row.mean_recovered_k == 1.0);  // single exact termination step
    } else {
      CHECK(row.mean_recovered_k == 4.0);  // well below the critical sparsity
    }
  }
  for (const auto& record : result.records) {
    CHECK(record.recovered_k == record.iterations);
    CHECK(record.exact == -1);
  }
}

TEST_CASE("recovered sparsity sweep: odct family shares one deterministic dictionary") {
  RecoveredSparsityConfig config;
  config.family = DictionaryFamily::odct;
  config.n = 32;
  config.redundancy = 2;
  config.k_values = {3};
  config.trials = 4;
  config.base_seed = 9;
  config.threads = 2;
  const SweepResult a = recovered_sparsity_sweep(config);
  const SweepResult b = recovered_sparsity_sweep(config);
  CHECK(records_equal(a.records, b.records));
}

TEST_CASE("psnr experiment: noise-free pair codes every block with one atom") {
  const auto [reference, target] =
      synthetic_frame_pair(48, 48, 2, -1, 0.0, RngSpec{"mt19937-polar", 77});
  PsnrExperimentConfig config;
  config.reference = reference;
  config.target = target;
  config.block = 8;
  config.search = SearchRange{-4, 4};
  config.eps_rel = {1e-5};
  config.threads = 2;
  const SweepResult result = psnr_vs_k_experiment(config);
  REQUIRE(result.rows.size() == 2);
  for (const auto& row : result.rows) {
    CHECK(row.mean_recovered_k == 1.0);
    CHECK(row.mean_psnr >= 100.0);
  }
  CHECK(result.psnr_pixels > 0);
}

TEST_CASE("psnr experiment: flat frame skips blocks with a flag") {
  Mat flat_ref(32, 32);
  Mat flat_tgt(32, 32);
  for (int j = 0; j < 32; ++j) {
    for (int i = 0; i < 32; ++i) {
      flat_ref(i, j) = 100.0;
      flat_tgt(i, j) = 100.0;
    }
  }
  PsnrExperimentConfig config;
  config.reference = flat_ref;
  config.target = flat_tgt;
  config.block = 8;
  config.search = SearchRange{-3, 3};
  config.eps_rel = {1e-3};
  config.threads = 1;
  const SweepResult result = psnr_vs_k_experiment(config);
  REQUIRE(!result.records.empty());
  for (const auto& record : result.records) {
    CHECK(record.recovered_k == 0);
    CHECK(record.flag == "flat-block");
  }
}

TEST_CASE("psnr experiment: frame with room for a single block") {
  const auto [reference, target] =
      synthetic_frame_pair(16, 16, 1, 1, 1.0, RngSpec{"mt19937-polar", 13});
  PsnrExperimentConfig config;
  config.reference = reference;
  config.target = target;
  config.block = 8;
  config.search = SearchRange{-4, 4};
  config.eps_rel = {1e-2};
  config.threads = 1;
  const SweepResult result = psnr_vs_k_experiment(config);
  // 16 = 4 + 8 + 4: exactly one block fits with its search margin.
  CHECK(result.records.size() == 2);
  for (const auto& row : result.rows) {
    CHECK(row.trials == 1);
    CHECK(row.mean_recovered_k ==
          static_cast<double>(result.records[row.algo == "omp" ? 0 : 1].recovered_k));
  }
}

TEST_CASE("psnr experiment: too-small frame is rejected") {
  const auto [reference, target] =
      synthetic_frame_pair(10, 10, 0, 0, 0.0, RngSpec{"mt19937-polar", 14});
  PsnrExperimentConfig config;
  config.reference = reference;
  config.target = target;
  config.block = 8;
  config.search = SearchRange{-4, 4};
  config.eps_rel = {1e-2};
  CHECK_THROWS_AS(psnr_vs_k_experiment(config), ParameterError);
}

TEST_CASE("runtime benchmark: produces rows and a positive ratio") {
  BenchConfig config;
  config.n = 32;
  config.redundancy = 2;
  config.k_values = {3};
  config.trials = 3;
  config.warmup = 1;
  config.base_seed = 2;
  const SweepResult result = runtime_benchmark(config);
  CHECK(result.records.size() == 9);  // 3 trials x 3 algorithms
  CHECK(eomp_over_omp_ratio(result, 3) > 0.0);
  CHECK_THROWS_AS(eomp_over_omp_ratio(result, 99), ParameterError);
}

TEST_CASE("runtime benchmark: single-atom signals cost both solvers the same") {
  // At k = 1 both terminate after one selection pass, before any remaining-set
  // orthonormalization happens, so the time ratio sits near 1. The band is
  // wide because the per-trial times are microseconds.
  BenchConfig config;
  config.n = 128;
  config.redundancy = 2;
  config.k_values = {1};
  config.trials = 50;
  config.warmup = 3;
  config.base_seed = 4;
  const SweepResult result = runtime_benchmark(config);
  for (const auto& record : result.records) {
    CHECK(record.iterations == 1);
  }
  const double ratio = eomp_over_omp_ratio(result, 1);
  CHECK(ratio > 0.4);
  CHECK(ratio < 2.5);
}
