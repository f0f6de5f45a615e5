#pragma once

#include <stdexcept>
#include <string>

namespace eomp {

// Mismatched operand sizes (vector lengths, matrix shapes).
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Invalid user-supplied parameter (k > m, m < n, out-of-range shift, ...).
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Caller violated a documented precondition of a numeric kernel.
struct ContractError : std::logic_error {
  using std::logic_error::logic_error;
};

// Numerically rank-deficient system; `column` is the offending column index.
struct SingularityError : std::runtime_error {
  SingularityError(const std::string& msg, int column_index)
      : std::runtime_error(msg), column(column_index) {}
  int column;
};

// Dictionary construction produced an unusable atom.
struct ConstructionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input file; `line` is 1-based, 0 when the fault is not line-local.
struct IoError : std::runtime_error {
  IoError(const std::string& msg, std::string file_path, int line_number = 0)
      : std::runtime_error(msg), path(std::move(file_path)), line(line_number) {}
  std::string path;
  int line;
};

}  // namespace eomp
