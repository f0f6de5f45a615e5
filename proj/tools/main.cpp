#include <cstdio>
#include <fstream>
#include <functional>
#include <list>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eomp/experiments.hpp"
#include "eomp/io.hpp"

namespace {

using namespace eomp;

std::vector<PursuitAlgo> parse_algo_list(const std::string& text) {
  std::vector<PursuitAlgo> algos;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    const auto algo = parse_algo(token);
    if (!algo) {
      throw ParameterError("unknown algorithm '" + token + "' (expected omp, eomp or omp-ls)");
    }
    algos.push_back(*algo);
  }
  if (algos.empty()) {
    throw ParameterError("empty algorithm list");
  }
  return algos;
}

Mat read_frame(const std::string& path) {
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".pgm") {
    return read_pgm(path);
  }
  return read_matrix(path);
}

// Final parameter values live in a Config: per-subcommand defaults, then the
// optional config file, then explicit flags. The merged Config also feeds the
// run manifest, so a run can be reproduced from the manifest alone.
class ConfigBuilder {
 public:
  explicit ConfigBuilder(CLI::App* cmd) : cmd_(cmd) {
    cmd->add_option("--config", config_path_, "key = value config file; flags override it");
  }

  void set_default(const std::string& key, const std::string& value) { defaults_.set(key, value); }

  void bind(const std::string& flag, const std::string& key, const std::string& help) {
    bindings_.push_back(Binding{nullptr, key, std::string()});
    Binding& binding = bindings_.back();
    binding.option = cmd_->add_option(flag, binding.value, help);
  }

  void bind_flag(const std::string& flag, const std::string& key, const std::string& help) {
    flag_bindings_.push_back(FlagBinding{nullptr, key});
    FlagBinding& binding = flag_bindings_.back();
    binding.option = cmd_->add_flag(flag, help);
  }

  Config resolve() const {
    Config cfg = defaults_;
    if (!config_path_.empty()) {
      const Config file_config = read_config(config_path_);
      for (const auto& [key, value] : file_config.values()) {
        cfg.set(key, value);
      }
    }
    for (const auto& binding : bindings_) {
      if (binding.option->count() > 0) {
        cfg.set(binding.key, binding.value);
      }
    }
    for (const auto& binding : flag_bindings_) {
      if (binding.option->count() > 0) {
        cfg.set(binding.key, "1");
      }
    }
    return cfg;
  }

 private:
  struct Binding {
    CLI::Option* option;
    std::string key;
    std::string value;
  };
  struct FlagBinding {
    CLI::Option* option;
    std::string key;
  };

  CLI::App* cmd_;
  std::string config_path_;
  Config defaults_;
  std::list<Binding> bindings_;
  std::list<FlagBinding> flag_bindings_;
};

std::uint64_t base_seed_of(const Config& cfg, std::uint64_t fallback) {
  // The config schema calls it base_seed; the flag spells it --seed.
  return cfg.has("base_seed") ? cfg.get_u64("base_seed", fallback)
                              : cfg.get_u64("seed", fallback);
}

void require_experiment_key(const Config& cfg, const std::string& expected) {
  const std::string declared = cfg.get_string("experiment", expected);
  if (declared != expected) {
    throw ParameterError("config declares experiment '" + declared + "' but the subcommand is '" +
                         expected + "'");
  }
}

int positive_int(const Config& cfg, const std::string& key) {
  const std::int64_t v = cfg.get_int(key, 0);
  if (v < 1) {
    throw ParameterError("parameter '" + key + "' must be a positive integer, got " +
                         std::to_string(v));
  }
  return static_cast<int>(v);
}

double nonnegative_double(const Config& cfg, const std::string& key) {
  const double v = cfg.get_double(key, 0.0);
  if (v < 0.0) {
    throw ParameterError("parameter '" + key + "' must be nonnegative");
  }
  return v;
}

void write_experiment_outputs(const SweepResult& result, const Config& cfg,
                              const std::string& out_prefix, bool include_timing) {
  write_trials_csv(out_prefix + "_trials.csv", result, include_timing);
  write_sweep_csv(out_prefix + "_sweep.csv", result, include_timing);
  // The manifest hash identifies the experiment, so purely operational keys
  // (output location, worker count) stay out of it.
  Config experiment_cfg;
  for (const auto& [key, value] : cfg.values()) {
    if (key != "out" && key != "threads") {
      experiment_cfg.set(key, value);
    }
  }
  write_manifest(out_prefix + "_manifest.txt", experiment_cfg, result.experiment);
}

double row_value(const SweepResult& result, double sweep_value, const std::string& algo) {
  for (const auto& row : result.rows) {
    if (row.sweep_value == sweep_value && row.algo == algo) {
      return row.mean_recovered_k;
    }
  }
  return -1.0;
}

int run_gen_dict(const Config& cfg) {
  const std::string family = cfg.get_string("family", "gaussian");
  const std::string out = cfg.get_string("out", "");
  if (out.empty()) {
    throw ParameterError("gen-dict requires --out");
  }
  Dictionary dict;
  if (family == "gaussian") {
    const Normalization norm =
        cfg.get_int("raw_atoms", 0) != 0 ? Normalization::raw : Normalization::unit_l2;
    dict = gaussian_ensemble(positive_int(cfg, "n"), positive_int(cfg, "m"),
                             RngSpec{"mt19937-polar", cfg.get_u64("seed", 0)}, norm);
  } else if (family == "odct") {
    dict = odct_dictionary(positive_int(cfg, "n"), positive_int(cfg, "redundancy"));
  } else if (family == "shifted-block") {
    const Mat frame = read_frame(cfg.get_string("frame", ""));
    const int block_size = positive_int(cfg, "block_size");
    const BlockSpec block{static_cast<int>(cfg.get_int("block_row", 0)),
                          static_cast<int>(cfg.get_int("block_col", 0)), block_size, block_size};
    const SearchRange search{static_cast<int>(cfg.get_int("search_lo", -7)),
                             static_cast<int>(cfg.get_int("search_hi", 7))};
    dict = shifted_block_dictionary(frame, block, search);
  } else {
    throw ParameterError("unknown dictionary family '" + family + "'");
  }
  write_matrix(out, dict.atoms);
  std::printf("gen-dict: wrote %dx%d %s dictionary to %s\n", dict.n(), dict.m(),
              to_string(dict.family), out.c_str());
  return 0;
}

int run_gen_signal(const Config& cfg) {
  const int m = positive_int(cfg, "m");
  const int k = positive_int(cfg, "k");
  const std::string out = cfg.get_string("out", "");
  if (out.empty()) {
    throw ParameterError("gen-signal requires --out");
  }
  const SparseSignal signal =
      k_sparse_gaussian_signal(m, k, RngSpec{"mt19937-polar", cfg.get_u64("seed", 0)});
  write_vector(out, signal.dense());

  const std::string dict_path = cfg.get_string("dict", "");
  const std::string obs_out = cfg.get_string("obs_out", "");
  if (!dict_path.empty() && !obs_out.empty()) {
    Dictionary dict;
    dict.atoms = read_matrix(dict_path);
    write_vector(obs_out, synthesize(dict, signal));
    std::printf("gen-signal: wrote k=%d signal to %s and observation to %s\n", k, out.c_str(),
                obs_out.c_str());
  } else {
    std::printf("gen-signal: wrote k=%d signal to %s\n", k, out.c_str());
  }
  return 0;
}

int run_solve(const Config& cfg) {
  Dictionary dict;
  dict.atoms = read_matrix(cfg.get_string("dict", ""));
  const Vec y = read_vector(cfg.get_string("obs", ""));
  const auto algo = parse_algo(cfg.get_string("algo", "eomp"));
  if (!algo) {
    throw ParameterError("unknown algorithm '" + cfg.get_string("algo", "") + "'");
  }
  StopRule stop;
  stop.epsilon = nonnegative_double(cfg, "eps");
  stop.max_iter = static_cast<int>(cfg.get_int("max_iter", 0));

  PursuitResult result = run_pursuit(*algo, dict, y, stop);
  if (cfg.get_int("refit", 0) != 0 && !result.support.empty()) {
    result.x = refit(dict, result.support, y);
  }

  char buffer[40];
  std::ostringstream report;
  report << "algorithm: " << to_string(*algo) << '\n';
  report << "dictionary: " << dict.n() << "x" << dict.m() << '\n';
  report << "iterations: " << result.iterations << '\n';
  report << "termination: " << to_string(result.termination) << '\n';
  report << "support:";
  for (int idx : result.support) {
    report << ' ' << idx;
  }
  report << "\nz:";
  for (double z : result.z) {
    std::snprintf(buffer, sizeof(buffer), "%.17g", z);
    report << ' ' << buffer;
  }
  report << "\nresidual_norms:";
  for (double r : result.residual_norms) {
    std::snprintf(buffer, sizeof(buffer), "%.17g", r);
    report << ' ' << buffer;
  }
  report << '\n';
  if (result.x) {
    report << "x:";
    for (double v : *result.x) {
      std::snprintf(buffer, sizeof(buffer), "%.17g", v);
      report << ' ' << buffer;
    }
    report << '\n';
  }

  const std::string report_path = cfg.get_string("report", "");
  if (!report_path.empty()) {
    std::ofstream file(report_path);
    if (!file) {
      throw IoError("cannot open '" + report_path + "' for writing", report_path);
    }
    file << report.str();
  }
  std::fputs(report.str().c_str(), stdout);

  const std::string x_out = cfg.get_string("x_out", "");
  if (!x_out.empty()) {
    if (!result.x) {
      throw ParameterError("--x-out requires --refit and a nonempty support");
    }
    Vec dense(static_cast<std::size_t>(dict.m()), 0.0);
    for (std::size_t i = 0; i < result.support.size(); ++i) {
      dense[static_cast<std::size_t>(result.support[i])] = (*result.x)[i];
    }
    write_vector(x_out, dense);
  }
  return 0;
}

int run_exact_recovery(const Config& cfg) {
  require_experiment_key(cfg, "exact-recovery");
  ExactRecoveryConfig config;
  const bool full = cfg.get_int("full_scale", 0) != 0;
  config.n = static_cast<int>(cfg.get_int("n", full ? 128 : 64));
  config.m = static_cast<int>(cfg.get_int("m", full ? 256 : 128));
  config.k_values = parse_int_range(cfg.get_string("k_range", full ? "4:64:4" : "4:48:4"));
  config.trials = static_cast<int>(cfg.get_int("trials", full ? 500 : 100));
  config.base_seed = base_seed_of(cfg, 1);
  config.algos = parse_algo_list(cfg.get_string("algos", "omp,eomp"));
  config.threads = static_cast<int>(cfg.get_int("threads", 0));

  const SweepResult result = exact_recovery_sweep(config);
  const std::string out = cfg.get_string("out", "exact-recovery");
  write_experiment_outputs(result, cfg, out, false);

  double omp_rate = 1.0;
  double eomp_rate = 1.0;
  for (const auto& row : result.rows) {
    if (row.algo == "omp") {
      omp_rate = std::min(omp_rate, row.recovery_rate);
    } else if (row.algo == "eomp") {
      eomp_rate = std::min(eomp_rate, row.recovery_rate);
    }
  }
  std::printf(
      "exact-recovery: n=%d m=%d trials=%d, %zu k values; min rate omp=%.3f eomp=%.3f -> "
      "%s_*.csv\n",
      config.n, config.m, config.trials, config.k_values.size(), omp_rate, eomp_rate, out.c_str());
  return 0;
}

int run_recovered_sparsity(const Config& cfg) {
  require_experiment_key(cfg, "recovered-sparsity");
  RecoveredSparsityConfig config;
  const bool full = cfg.get_int("full_scale", 0) != 0;
  const std::string family = cfg.get_string("family", "gaussian");
  if (family == "gaussian") {
    config.family = DictionaryFamily::gaussian;
  } else if (family == "odct") {
    config.family = DictionaryFamily::odct;
  } else {
    throw ParameterError("recovered-sparsity: family must be gaussian or odct");
  }
  config.n = static_cast<int>(cfg.get_int("n", 128));
  config.m = static_cast<int>(cfg.get_int("m", 2 * config.n));
  config.redundancy = static_cast<int>(cfg.get_int("redundancy", 2));
  config.k_values = parse_int_range(cfg.get_string("k_range", full ? "40:70" : "40:70:5"));
  config.trials = static_cast<int>(cfg.get_int("trials", full ? 500 : 100));
  config.eps = nonnegative_double(cfg, "eps");
  config.base_seed = base_seed_of(cfg, 1);
  config.algos = parse_algo_list(cfg.get_string("algos", "omp,eomp"));
  config.normalization =
      cfg.get_int("raw_atoms", 0) != 0 ? Normalization::raw : Normalization::unit_l2;
  config.threads = static_cast<int>(cfg.get_int("threads", 0));

  const SweepResult result = recovered_sparsity_sweep(config);
  const std::string out = cfg.get_string("out", "recovered-sparsity");
  write_experiment_outputs(result, cfg, out, false);

  double peak = -1.0;
  int peak_k = 0;
  for (int k : config.k_values) {
    const double omp_k = row_value(result, k, "omp");
    const double eomp_k = row_value(result, k, "eomp");
    if (omp_k > 0.0 && eomp_k > 0.0) {
      const double reduction = 1.0 - eomp_k / omp_k;
      if (reduction > peak) {
        peak = reduction;
        peak_k = k;
      }
    }
  }
  std::printf(
      "recovered-sparsity: family=%s n=%d trials=%d; peak eomp reduction %.1f%% at k=%d -> "
      "%s_*.csv\n",
      family.c_str(), config.n, config.trials, 100.0 * peak, peak_k, out.c_str());
  return 0;
}

int run_psnr_k(const Config& cfg) {
  require_experiment_key(cfg, "psnr-k");
  PsnrExperimentConfig config;
  const std::string ref_path = cfg.get_string("ref", "");
  const std::string target_path = cfg.get_string("target", "");
  if (!ref_path.empty() || !target_path.empty()) {
    if (ref_path.empty() || target_path.empty()) {
      throw ParameterError("psnr-k: provide both --ref and --target, or neither");
    }
    config.reference = read_frame(ref_path);
    config.target = read_frame(target_path);
    if (ref_path.size() >= 4 && ref_path.substr(ref_path.size() - 4) == ".pgm") {
      config.peak = 255.0;
    }
  } else {
    auto [reference, target] = synthetic_frame_pair(
        static_cast<int>(cfg.get_int("height", 64)), static_cast<int>(cfg.get_int("width", 64)),
        static_cast<int>(cfg.get_int("shift_r", 3)), static_cast<int>(cfg.get_int("shift_c", -2)),
        cfg.get_double("sigma", 2.0), RngSpec{"mt19937-polar", cfg.get_u64("seed", 7)});
    config.reference = std::move(reference);
    config.target = std::move(target);
  }
  config.block = positive_int(cfg, "block");
  config.search = SearchRange{static_cast<int>(cfg.get_int("search_lo", -7)),
                              static_cast<int>(cfg.get_int("search_hi", 7))};
  config.eps_rel =
      geometric_eps_grid(cfg.get_double("eps_hi", 1e-1), cfg.get_double("eps_lo", 1e-4),
                         static_cast<int>(cfg.get_int("eps_points", 8)));
  config.algos = parse_algo_list(cfg.get_string("algos", "omp,eomp"));
  config.threads = static_cast<int>(cfg.get_int("threads", 0));

  const SweepResult result = psnr_vs_k_experiment(config);
  const std::string out = cfg.get_string("out", "psnr-k");
  write_experiment_outputs(result, cfg, out, false);
  if (cfg.get_int("save_frames", 0) != 0) {
    write_pgm(out + "_ref.pgm", config.reference);
    write_pgm(out + "_target.pgm", config.target);
  }

  const double finest = config.eps_rel.back();
  std::printf(
      "psnr-k: %lld coded pixels, peak=%.2f; at eps=%g avg K omp=%.2f eomp=%.2f -> %s_*.csv\n",
      static_cast<long long>(result.psnr_pixels), result.psnr_peak, finest,
      row_value(result, finest, "omp"), row_value(result, finest, "eomp"), out.c_str());
  return 0;
}

int run_bench(const Config& cfg) {
  require_experiment_key(cfg, "bench");
  BenchConfig config;
  config.n = static_cast<int>(cfg.get_int("n", 128));
  config.redundancy = static_cast<int>(cfg.get_int("redundancy", 2));
  config.k_values = parse_int_range(cfg.get_string("k_range", "10:60:10"));
  config.trials = static_cast<int>(cfg.get_int("trials", 100));
  config.warmup = static_cast<int>(cfg.get_int("warmup", 3));
  config.eps = nonnegative_double(cfg, "eps");
  config.base_seed = base_seed_of(cfg, 1);

  const SweepResult result = runtime_benchmark(config);
  const std::string out = cfg.get_string("out", "bench");
  write_experiment_outputs(result, cfg, out, true);

  std::printf("bench: n=%d odct %dx trials=%d; eomp/omp time ratio:", config.n, config.redundancy,
              config.trials);
  for (int k : config.k_values) {
    std::printf(" k=%d:%.2f", k, eomp_over_omp_ratio(result, k));
  }
  std::printf(" -> %s_*.csv\n", out.c_str());
  return 0;
}

int run_complexity(const Config& cfg) {
  const int n = positive_int(cfg, "n");
  const int m = positive_int(cfg, "m");
  const int s = positive_int(cfg, "s");
  const ComplexityCount count = complexity_model(n, m, s);
  std::printf("complexity: n=%d m=%d s=%d omp=%.0f eomp=%.0f ratio=%.6f\n", n, m, s,
              count.omp_multiplies, count.eomp_multiplies, count.ratio);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Sparse pursuit toolkit: OMP and eOMP solvers, dictionary generators and benchmark "
      "experiments"};
  app.require_subcommand(1);

  std::function<int()> action;

  auto* gen_dict = app.add_subcommand("gen-dict", "Generate a dictionary matrix file");
  ConfigBuilder gen_dict_cfg(gen_dict);
  gen_dict_cfg.set_default("family", "gaussian");
  gen_dict_cfg.set_default("seed", "0");
  gen_dict_cfg.bind("--family", "family", "gaussian, odct or shifted-block");
  gen_dict_cfg.bind("--n", "n", "signal dimension");
  gen_dict_cfg.bind("--m", "m", "atom count (gaussian)");
  gen_dict_cfg.bind("--redundancy", "redundancy", "overcompleteness factor (odct)");
  gen_dict_cfg.bind("--seed", "seed", "random seed");
  gen_dict_cfg.bind_flag("--raw-atoms", "raw_atoms", "skip column normalization (gaussian)");
  gen_dict_cfg.bind("--frame", "frame", "reference frame file, .pgm or matrix text");
  gen_dict_cfg.bind("--block-row", "block_row", "block origin row (shifted-block)");
  gen_dict_cfg.bind("--block-col", "block_col", "block origin column (shifted-block)");
  gen_dict_cfg.bind("--block-size", "block_size", "square block side (shifted-block)");
  gen_dict_cfg.bind("--search-lo", "search_lo", "smallest shift (shifted-block)");
  gen_dict_cfg.bind("--search-hi", "search_hi", "largest shift (shifted-block)");
  gen_dict_cfg.bind("--out", "out", "output matrix file");
  gen_dict->callback([&action, &gen_dict_cfg] {
    action = [cfg = gen_dict_cfg.resolve()] { return run_gen_dict(cfg); };
  });

  auto* gen_signal = app.add_subcommand("gen-signal", "Generate a k-sparse Gaussian signal");
  ConfigBuilder gen_signal_cfg(gen_signal);
  gen_signal_cfg.set_default("seed", "0");
  gen_signal_cfg.bind("--m", "m", "signal length");
  gen_signal_cfg.bind("--k", "k", "sparsity");
  gen_signal_cfg.bind("--seed", "seed", "random seed");
  gen_signal_cfg.bind("--out", "out", "output vector file (dense embedding)");
  gen_signal_cfg.bind("--dict", "dict", "dictionary file for synthesizing the observation");
  gen_signal_cfg.bind("--obs-out", "obs_out", "output file for y = dictionary * signal");
  gen_signal->callback([&action, &gen_signal_cfg] {
    action = [cfg = gen_signal_cfg.resolve()] { return run_gen_signal(cfg); };
  });

  auto* solve = app.add_subcommand("solve", "Run one pursuit on a dictionary and observation");
  ConfigBuilder solve_cfg(solve);
  solve_cfg.set_default("algo", "eomp");
  solve_cfg.set_default("eps", "1e-5");
  solve_cfg.bind("--dict", "dict", "dictionary matrix file");
  solve_cfg.bind("--obs", "obs", "observation vector file");
  solve_cfg.bind("--algo", "algo", "omp, eomp or omp-ls");
  solve_cfg.bind("--eps", "eps", "absolute residual threshold");
  solve_cfg.bind("--max-iter", "max_iter", "iteration cap (0 = min(N, M))");
  solve_cfg.bind_flag("--refit", "refit", "least-squares refit on the original atoms");
  solve_cfg.bind("--report", "report", "also write the text report to this file");
  solve_cfg.bind("--x-out", "x_out", "write the dense refit coefficients to this file");
  solve->callback([&action, &solve_cfg] {
    action = [cfg = solve_cfg.resolve()] { return run_solve(cfg); };
  });

  auto* exact = app.add_subcommand("exact-recovery", "Exact recovery rate sweep");
  ConfigBuilder exact_cfg(exact);
  exact_cfg.bind("--n", "n", "signal dimension");
  exact_cfg.bind("--m", "m", "atom count");
  exact_cfg.bind("--k-range", "k_range", "planted sparsity grid lo:hi[:step]");
  exact_cfg.bind("--trials", "trials", "trials per k");
  exact_cfg.bind("--seed", "seed", "base seed");
  exact_cfg.bind("--algos", "algos", "comma list of omp,eomp,omp-ls");
  exact_cfg.bind("--threads", "threads", "worker threads (0 = auto)");
  exact_cfg.bind("--out", "out", "output path prefix");
  exact_cfg.bind_flag("--full-scale", "full_scale", "N=128, M=256, 500 trials");
  exact_cfg.bind_flag("--desk-scale", "desk_scale", "fast defaults (N=64, 100 trials); the default");
  exact->callback([&action, &exact_cfg] {
    action = [cfg = exact_cfg.resolve()] { return run_exact_recovery(cfg); };
  });

  auto* sparsity = app.add_subcommand("recovered-sparsity", "Recovered sparsity sweep");
  ConfigBuilder sparsity_cfg(sparsity);
  sparsity_cfg.set_default("eps", "1e-5");
  sparsity_cfg.bind("--family", "family", "gaussian or odct");
  sparsity_cfg.bind("--n", "n", "signal dimension");
  sparsity_cfg.bind("--m", "m", "atom count (gaussian)");
  sparsity_cfg.bind("--redundancy", "redundancy", "overcompleteness (odct)");
  sparsity_cfg.bind("--k-range", "k_range", "planted sparsity grid lo:hi[:step]");
  sparsity_cfg.bind("--trials", "trials", "trials per k");
  sparsity_cfg.bind("--eps", "eps", "absolute residual threshold");
  sparsity_cfg.bind("--seed", "seed", "base seed");
  sparsity_cfg.bind("--algos", "algos", "comma list of omp,eomp,omp-ls");
  sparsity_cfg.bind_flag("--raw-atoms", "raw_atoms",
                         "unit-variance columns without normalization");
  sparsity_cfg.bind("--threads", "threads", "worker threads (0 = auto)");
  sparsity_cfg.bind("--out", "out", "output path prefix");
  sparsity_cfg.bind_flag("--full-scale", "full_scale", "500 trials, k step 1");
  sparsity_cfg.bind_flag("--desk-scale", "desk_scale", "100 trials, k step 5; the default");
  sparsity->callback([&action, &sparsity_cfg] {
    action = [cfg = sparsity_cfg.resolve()] { return run_recovered_sparsity(cfg); };
  });

  auto* psnr = app.add_subcommand("psnr-k", "Block-coding PSNR vs average sparsity sweep");
  ConfigBuilder psnr_cfg(psnr);
  psnr_cfg.set_default("block", "8");
  psnr_cfg.bind("--ref", "ref", "reference frame (.pgm or matrix text)");
  psnr_cfg.bind("--target", "target", "target frame (.pgm or matrix text)");
  psnr_cfg.bind("--height", "height", "synthetic frame height");
  psnr_cfg.bind("--width", "width", "synthetic frame width");
  psnr_cfg.bind("--shift-r", "shift_r", "synthetic global row shift");
  psnr_cfg.bind("--shift-c", "shift_c", "synthetic global column shift");
  psnr_cfg.bind("--sigma", "sigma", "synthetic noise standard deviation");
  psnr_cfg.bind("--seed", "seed", "synthetic frame seed");
  psnr_cfg.bind("--block", "block", "square block side");
  psnr_cfg.bind("--search-lo", "search_lo", "smallest shift");
  psnr_cfg.bind("--search-hi", "search_hi", "largest shift");
  psnr_cfg.bind("--eps-hi", "eps_hi", "largest relative threshold");
  psnr_cfg.bind("--eps-lo", "eps_lo", "smallest relative threshold");
  psnr_cfg.bind("--eps-points", "eps_points", "sweep points");
  psnr_cfg.bind("--algos", "algos", "comma list of omp,eomp,omp-ls");
  psnr_cfg.bind("--threads", "threads", "worker threads (0 = auto)");
  psnr_cfg.bind_flag("--save-frames", "save_frames", "also write <out>_ref.pgm and <out>_target.pgm");
  psnr_cfg.bind("--out", "out", "output path prefix");
  psnr->callback([&action, &psnr_cfg] {
    action = [cfg = psnr_cfg.resolve()] { return run_psnr_k(cfg); };
  });

  auto* bench = app.add_subcommand("bench", "Solver wall-time benchmark on the 2x ODCT setup");
  ConfigBuilder bench_cfg(bench);
  bench_cfg.set_default("eps", "1e-5");
  bench_cfg.bind("--n", "n", "signal dimension");
  bench_cfg.bind("--redundancy", "redundancy", "overcompleteness");
  bench_cfg.bind("--k-range", "k_range", "sparsity grid lo:hi[:step]");
  bench_cfg.bind("--trials", "trials", "timed trials per k");
  bench_cfg.bind("--warmup", "warmup", "discarded warm-up trials per k");
  bench_cfg.bind("--eps", "eps", "absolute residual threshold");
  bench_cfg.bind("--seed", "seed", "base seed");
  bench_cfg.bind("--out", "out", "output path prefix");
  bench->callback([&action, &bench_cfg] {
    action = [cfg = bench_cfg.resolve()] { return run_bench(cfg); };
  });

  auto* complexity = app.add_subcommand("complexity", "Closed-form multiply counts and ratio");
  ConfigBuilder complexity_cfg(complexity);
  complexity_cfg.bind("--n", "n", "signal dimension");
  complexity_cfg.bind("--m", "m", "atom count (the K of the counts)");
  complexity_cfg.bind("--s", "s", "iterations");
  complexity->callback([&action, &complexity_cfg] {
    action = [cfg = complexity_cfg.resolve()] { return run_complexity(cfg); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return action();
  } catch (const IoError& e) {
    if (e.line > 0) {
      std::fprintf(stderr, "error: %s (%s, line %d)\n", e.what(), e.path.c_str(), e.line);
    } else {
      std::fprintf(stderr, "error: %s\n", e.what());
    }
    return 3;
  } catch (const ParameterError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
