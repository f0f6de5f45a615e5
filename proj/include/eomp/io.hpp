#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "eomp/experiments.hpp"
#include "eomp/linalg.hpp"

namespace eomp {

// Matrix text format: first line "rows cols", then rows lines of cols
// space-separated decimals, row-major. Written with 17 significant digits so
// a round trip is bit exact.
void write_matrix(const std::string& path, const Mat& a);
Mat read_matrix(const std::string& path);

// Vectors are stored as n x 1 matrices.
void write_vector(const std::string& path, std::span<const double> v);
Vec read_vector(const std::string& path);

// PGM frames. Writes P2 (plain); reads P2 and P5, maxval up to 255.
void write_pgm(const std::string& path, const Mat& image, int maxval = 255);
Mat read_pgm(const std::string& path);

// key = value lines, '#' comments, blank lines ignored.
class Config {
 public:
  Config() = default;

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  double get_double(const std::string& key, double fallback) const;

  // Sorted "key=value" lines; the hash input and manifest body.
  std::string canonical() const;
  std::uint64_t hash() const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

Config read_config(const std::string& path);

// "lo:hi" or "lo:hi:step" (inclusive); a single integer is a one-value range.
std::vector<int> parse_int_range(const std::string& text);

// CSV outputs: one file of raw trial records and one of aggregate rows.
// Timing columns are only written when include_timing is set (the benchmark);
// all other outputs are byte-identical across reruns.
void write_trials_csv(const std::string& path, const SweepResult& result, bool include_timing);
void write_sweep_csv(const std::string& path, const SweepResult& result, bool include_timing);

void write_manifest(const std::string& path, const Config& config, const std::string& experiment);

inline constexpr const char* kArtifactVersion = "eomp 1.0.0";

}  // namespace eomp
