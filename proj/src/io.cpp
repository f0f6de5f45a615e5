#include "eomp/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "eomp/rng.hpp"

namespace eomp {

namespace {

std::string format_double(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot open '" + path + "' for writing", path);
  }
  return out;
}

std::ifstream open_for_read(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open '" + path + "'", path);
  }
  return in;
}

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) {
    ++b;
  }
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) {
    --e;
  }
  return s.substr(b, e - b);
}

}  // namespace

void write_matrix(const std::string& path, const Mat& a) {
  if (a.rows() < 1 || a.cols() < 1) {
    throw DimensionError("write_matrix: matrix must be at least 1x1");
  }
  std::ofstream out = open_for_write(path);
  out << a.rows() << ' ' << a.cols() << '\n';
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      out << (j > 0 ? " " : "") << format_double(a(i, j));
    }
    out << '\n';
  }
  if (!out) {
    throw IoError("write failed for '" + path + "'", path);
  }
}

Mat read_matrix(const std::string& path) {
  std::ifstream in = open_for_read(path);
  std::string line;
  int line_number = 0;

  if (!std::getline(in, line)) {
    throw IoError("empty matrix file", path, 1);
  }
  ++line_number;
  std::istringstream header(line);
  long long rows = 0, cols = 0;
  if (!(header >> rows >> cols) || rows < 1 || cols < 1) {
    throw IoError("expected 'rows cols' header", path, line_number);
  }
  std::string extra;
  if (header >> extra) {
    throw IoError("trailing tokens after 'rows cols' header", path, line_number);
  }

  Mat a(static_cast<int>(rows), static_cast<int>(cols));
  for (int i = 0; i < rows; ++i) {
    if (!std::getline(in, line)) {
      throw IoError("unexpected end of file: expected " + std::to_string(rows) + " data rows",
                    path, line_number);
    }
    ++line_number;
    std::istringstream row(line);
    for (int j = 0; j < cols; ++j) {
      double v;
      if (!(row >> v)) {
        throw IoError("row has fewer than " + std::to_string(cols) + " values", path,
                      line_number);
      }
      if (!std::isfinite(v)) {
        throw IoError("non-finite value in column " + std::to_string(j), path, line_number);
      }
      a(i, static_cast<int>(j)) = v;
    }
    if (row >> extra) {
      throw IoError("row has more than " + std::to_string(cols) + " values", path, line_number);
    }
  }
  while (std::getline(in, line)) {
    ++line_number;
    if (!trim(line).empty()) {
      throw IoError("unexpected data after the last row", path, line_number);
    }
  }
  return a;
}

void write_vector(const std::string& path, std::span<const double> v) {
  if (v.empty()) {
    throw DimensionError("write_vector: vector must be nonempty");
  }
  Mat column(static_cast<int>(v.size()), 1);
  std::copy(v.begin(), v.end(), column.col(0).begin());
  write_matrix(path, column);
}

Vec read_vector(const std::string& path) {
  const Mat a = read_matrix(path);
  if (a.cols() != 1) {
    throw IoError("expected a single-column matrix, got " + std::to_string(a.cols()) + " columns",
                  path, 1);
  }
  return Vec(a.col(0).begin(), a.col(0).end());
}

void write_pgm(const std::string& path, const Mat& image, int maxval) {
  if (maxval < 1 || maxval > 255) {
    throw ParameterError("write_pgm: maxval must lie in [1, 255]");
  }
  std::ofstream out = open_for_write(path);
  out << "P2\n" << image.cols() << ' ' << image.rows() << '\n' << maxval << '\n';
  for (int i = 0; i < image.rows(); ++i) {
    for (int j = 0; j < image.cols(); ++j) {
      const long rounded = std::lround(image(i, j));
      const long clamped = std::clamp(rounded, 0L, static_cast<long>(maxval));
      out << (j > 0 ? " " : "") << clamped;
    }
    out << '\n';
  }
  if (!out) {
    throw IoError("write failed for '" + path + "'", path);
  }
}

namespace {

// Next whitespace-separated PGM token, skipping '#' comments.
std::string next_pgm_token(std::istream& in, const std::string& path) {
  std::string token;
  while (in) {
    const int c = in.peek();
    if (c == EOF) {
      break;
    }
    if (std::isspace(c)) {
      in.get();
      continue;
    }
    if (c == '#') {
      std::string comment;
      std::getline(in, comment);
      continue;
    }
    in >> token;
    return token;
  }
  throw IoError("truncated PGM header", path);
}

int parse_pgm_int(std::istream& in, const std::string& path, const char* what) {
  const std::string token = next_pgm_token(in, path);
  try {
    return std::stoi(token);
  } catch (const std::exception&) {
    throw IoError(std::string("bad PGM ") + what + ": '" + token + "'", path);
  }
}

}  // namespace

Mat read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path + "'", path);
  }
  std::string magic;
  in >> magic;
  if (magic != "P2" && magic != "P5") {
    throw IoError("not a P2/P5 PGM file", path, 1);
  }
  const int width = parse_pgm_int(in, path, "width");
  const int height = parse_pgm_int(in, path, "height");
  const int maxval = parse_pgm_int(in, path, "maxval");
  if (width < 1 || height < 1 || maxval < 1 || maxval > 255) {
    throw IoError("unsupported PGM geometry or maxval", path);
  }
  Mat image(height, width);
  if (magic == "P2") {
    for (int i = 0; i < height; ++i) {
      for (int j = 0; j < width; ++j) {
        image(i, j) = parse_pgm_int(in, path, "sample");
      }
    }
  } else {
    in.get();  // single whitespace after maxval
    std::vector<unsigned char> buffer(static_cast<std::size_t>(width) * height);
    in.read(reinterpret_cast<char*>(buffer.data()), static_cast<std::streamsize>(buffer.size()));
    if (in.gcount() != static_cast<std::streamsize>(buffer.size())) {
      throw IoError("truncated P5 payload", path);
    }
    for (int i = 0; i < height; ++i) {
      for (int j = 0; j < width; ++j) {
        image(i, j) = buffer[static_cast<std::size_t>(i) * width + j];
      }
    }
  }
  return image;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    return fallback;
  }
  try {
    std::size_t used = 0;
    const std::int64_t v = std::stoll(it->second, &used);
    if (used != it->second.size()) {
      throw std::invalid_argument("trailing");
    }
    return v;
  } catch (const std::exception&) {
    throw ParameterError("config key '" + key + "': not an integer: '" + it->second + "'");
  }
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    return fallback;
  }
  try {
    std::size_t used = 0;
    const std::uint64_t v = std::stoull(it->second, &used);
    if (used != it->second.size()) {
      throw std::invalid_argument("trailing");
    }
    return v;
  } catch (const std::exception&) {
    throw ParameterError("config key '" + key + "': not an unsigned integer: '" + it->second +
                         "'");
  }
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    return fallback;
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size() || !std::isfinite(v)) {
      throw std::invalid_argument("trailing");
    }
    return v;
  } catch (const std::exception&) {
    throw ParameterError("config key '" + key + "': not a number: '" + it->second + "'");
  }
}

std::string Config::canonical() const {
  std::string out;
  for (const auto& [key, value] : values_) {
    out += key;
    out += '=';
    out += value;
    out += '\n';
  }
  return out;
}

std::uint64_t Config::hash() const { return fnv1a64(canonical()); }

Config read_config(const std::string& path) {
  std::ifstream in = open_for_read(path);
  Config config;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::size_t comment = line.find('#');
    if (comment != std::string::npos) {
      line = line.substr(0, comment);
    }
    const std::string body = trim(line);
    if (body.empty()) {
      continue;
    }
    const std::size_t eq = body.find('=');
    if (eq == std::string::npos) {
      throw IoError("expected 'key = value'", path, line_number);
    }
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) {
      throw IoError("empty key", path, line_number);
    }
    config.set(key, value);
  }
  return config;
}

std::vector<int> parse_int_range(const std::string& text) {
  std::vector<long long> parts;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stoll(trim(token), &used));
      if (used != trim(token).size()) {
        throw std::invalid_argument("trailing");
      }
    } catch (const std::exception&) {
      throw ParameterError("bad range '" + text + "': expected lo:hi[:step]");
    }
  }
  if (parts.empty() || parts.size() > 3) {
    throw ParameterError("bad range '" + text + "': expected lo:hi[:step]");
  }
  const long long lo = parts[0];
  const long long hi = parts.size() >= 2 ? parts[1] : parts[0];
  const long long step = parts.size() == 3 ? parts[2] : 1;
  if (step < 1 || hi < lo) {
    throw ParameterError("bad range '" + text + "': need hi >= lo and step >= 1");
  }
  std::vector<int> values;
  for (long long v = lo; v <= hi; v += step) {
    values.push_back(static_cast<int>(v));
  }
  return values;
}

namespace {

std::string csv_double(double v) {
  // Integral values print without an exponent so k columns stay readable.
  if (v == static_cast<double>(static_cast<long long>(v)) && std::abs(v) < 1e15) {
    return std::to_string(static_cast<long long>(v));
  }
  return format_double(v);
}

}  // namespace

void write_trials_csv(const std::string& path, const SweepResult& result, bool include_timing) {
  std::ofstream out = open_for_write(path);
  out << "experiment,sweep_value,trial,seed,algo,k_true,recovered_k,exact_recovered,"
         "iterations,final_residual,flag";
  if (include_timing) {
    out << ",wall_time";
  }
  out << '\n';
  for (const auto& r : result.records) {
    out << r.experiment << ',' << csv_double(r.sweep_value) << ',' << r.trial << ',' << r.seed
        << ',' << r.algo << ',';
    if (r.k_true >= 0) {
      out << r.k_true;
    }
    out << ',' << r.recovered_k << ',';
    if (r.exact >= 0) {
      out << r.exact;
    }
    out << ',' << r.iterations << ',' << format_double(r.final_residual) << ',' << r.flag;
    if (include_timing) {
      out << ',' << format_double(r.wall_time);
    }
    out << '\n';
  }
  if (!out) {
    throw IoError("write failed for '" + path + "'", path);
  }
}

void write_sweep_csv(const std::string& path, const SweepResult& result, bool include_timing) {
  std::ofstream out = open_for_write(path);
  out << "experiment,sweep_value,algo,trials,mean_recovered_k,recovery_rate,mean_psnr";
  if (include_timing) {
    out << ",mean_wall_time,total_wall_time";
  }
  out << '\n';
  for (const auto& row : result.rows) {
    out << result.experiment << ',' << csv_double(row.sweep_value) << ',' << row.algo << ','
        << row.trials << ',' << format_double(row.mean_recovered_k) << ',';
    if (row.recovery_rate >= 0.0) {
      out << format_double(row.recovery_rate);
    }
    out << ',';
    if (row.mean_psnr >= 0.0) {
      out << format_double(row.mean_psnr);
    }
    if (include_timing) {
      out << ',' << format_double(row.mean_wall_time) << ',' << format_double(row.total_wall_time);
    }
    out << '\n';
  }
  if (!out) {
    throw IoError("write failed for '" + path + "'", path);
  }
}

void write_manifest(const std::string& path, const Config& config, const std::string& experiment) {
  std::ofstream out = open_for_write(path);
  char hash_hex[32];
  std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                static_cast<unsigned long long>(config.hash()));
  out << "artifact = " << kArtifactVersion << '\n';
  out << "experiment = " << experiment << '\n';
  out << "config_hash = " << hash_hex << '\n';
  out << "# config\n";
  out << config.canonical();
  if (!out) {
    throw IoError("write failed for '" + path + "'", path);
  }
}

}  // namespace eomp
