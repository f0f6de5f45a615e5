#include "eomp/linalg.hpp"

#include <cmath>
#include <string>

namespace eomp {

namespace {

void check_same_length(std::span<const double> a, std::span<const double> b, const char* op) {
  if (a.size() != b.size()) {
    throw DimensionError(std::string(op) + ": length mismatch (" + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()) + ")");
  }
}

}  // namespace

Mat::Mat(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 1 || cols < 1) {
    throw DimensionError("Mat: dimensions must be at least 1x1, got " + std::to_string(rows) +
                         "x" + std::to_string(cols));
  }
  data_.assign(static_cast<std::size_t>(rows) * cols, 0.0);
}

Mat Mat::with_zero_cols(int rows) {
  if (rows < 1) {
    throw DimensionError("Mat: row count must be at least 1");
  }
  Mat m;
  m.rows_ = rows;
  m.cols_ = 0;
  return m;
}

void Mat::push_col(std::span<const double> column) {
  if (static_cast<int>(column.size()) != rows_) {
    throw DimensionError("Mat::push_col: column length " + std::to_string(column.size()) +
                         " does not match row count " + std::to_string(rows_));
  }
  data_.insert(data_.end(), column.begin(), column.end());
  ++cols_;
}

double dot(std::span<const double> a, std::span<const double> b) {
  check_same_length(a, b, "dot");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc += a[i] * b[i];
  }
  return acc;
}

double norm2(std::span<const double> a) {
  double acc = 0.0;
  for (double v : a) {
    acc += v * v;
  }
  return std::sqrt(acc);
}

Vec axpy(double alpha, std::span<const double> x, std::span<const double> y) {
  check_same_length(x, y, "axpy");
  Vec out(y.begin(), y.end());
  axpy_inplace(alpha, x, out);
  return out;
}

void axpy_inplace(double alpha, std::span<const double> x, std::span<double> y) {
  check_same_length(x, std::span<const double>(y.data(), y.size()), "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) {
    y[i] += alpha * x[i];
  }
}

Vec matvec(const Mat& a, std::span<const double> x) {
  if (static_cast<int>(x.size()) != a.cols()) {
    throw DimensionError("matvec: vector length " + std::to_string(x.size()) +
                         " does not match column count " + std::to_string(a.cols()));
  }
  Vec out(static_cast<std::size_t>(a.rows()), 0.0);
  for (int j = 0; j < a.cols(); ++j) {
    axpy_inplace(x[static_cast<std::size_t>(j)], a.col(j), out);
  }
  return out;
}

Mat select_columns(const Mat& a, const std::vector<int>& indices) {
  Mat out = Mat::with_zero_cols(a.rows());
  for (int j : indices) {
    if (j < 0 || j >= a.cols()) {
      throw DimensionError("select_columns: index " + std::to_string(j) + " out of range");
    }
    out.push_col(a.col(j));
  }
  return out;
}

Vec least_squares(const Mat& a, std::span<const double> y) {
  const int n = a.rows();
  const int k = a.cols();
  if (static_cast<int>(y.size()) != n) {
    throw DimensionError("least_squares: rhs length " + std::to_string(y.size()) +
                         " does not match row count " + std::to_string(n));
  }
  if (k < 1) {
    throw DimensionError("least_squares: system has no columns");
  }

  // Thin QR by modified Gram-Schmidt. Each column gets a second projection
  // pass, which keeps Q orthonormal to machine precision at these sizes.
  Mat q = Mat::with_zero_cols(n);
  Mat r(k, k);
  for (int j = 0; j < k; ++j) {
    Vec v(a.col(j).begin(), a.col(j).end());
    const double original_norm = norm2(v);
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i < j; ++i) {
        const double proj = dot(q.col(i), v);
        r(i, j) += proj;
        axpy_inplace(-proj, q.col(i), v);
      }
    }
    const double remaining = norm2(v);
    if (remaining < kRankTol * original_norm || original_norm == 0.0) {
      throw SingularityError("least_squares: column " + std::to_string(j) +
                                 " is linearly dependent on earlier columns",
                             j);
    }
    r(j, j) = remaining;
    for (double& e : v) {
      e /= remaining;
    }
    q.push_col(v);
  }

  // x = R^-1 Q^T y by back substitution.
  Vec x(static_cast<std::size_t>(k), 0.0);
  for (int j = 0; j < k; ++j) {
    x[static_cast<std::size_t>(j)] = dot(q.col(j), y);
  }
  for (int j = k - 1; j >= 0; --j) {
    double acc = x[static_cast<std::size_t>(j)];
    for (int i = j + 1; i < k; ++i) {
      acc -= r(j, i) * x[static_cast<std::size_t>(i)];
    }
    x[static_cast<std::size_t>(j)] = acc / r(j, j);
  }
  return x;
}

}  // namespace eomp
