#pragma once

#include <span>
#include <vector>

#include "eomp/errors.hpp"

namespace eomp {

using Vec = std::vector<double>;

// Dense column-major matrix of doubles. Column access is contiguous, which is
// the hot path everywhere (atoms are columns).
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols);

  // A rows x 0 matrix meant to be grown with push_col (e.g. the basis of
  // chosen atoms). Regular construction requires cols >= 1.
  static Mat with_zero_cols(int rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(j) * rows_ + i]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(j) * rows_ + i]; }

  std::span<double> col(int j) {
    return {data_.data() + static_cast<std::size_t>(j) * rows_, static_cast<std::size_t>(rows_)};
  }
  std::span<const double> col(int j) const {
    return {data_.data() + static_cast<std::size_t>(j) * rows_, static_cast<std::size_t>(rows_)};
  }

  void push_col(std::span<const double> column);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

// y + alpha * x
Vec axpy(double alpha, std::span<const double> x, std::span<const double> y);
// y += alpha * x
void axpy_inplace(double alpha, std::span<const double> x, std::span<double> y);

Vec matvec(const Mat& a, std::span<const double> x);

// Columns of `a` selected by `indices`, in order.
Mat select_columns(const Mat& a, const std::vector<int>& indices);

// Minimizes ||y - A x||_2. QR by modified Gram-Schmidt with a
// reorthogonalization pass; never forms normal equations. Throws
// SingularityError naming the offending column when A is rank deficient
// (post-orthogonalization column norm below 1e-10 of the original).
Vec least_squares(const Mat& a, std::span<const double> y);

inline constexpr double kRankTol = 1e-10;

}  // namespace eomp
