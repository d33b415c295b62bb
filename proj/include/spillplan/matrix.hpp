#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace spillplan {

// Dense row-major square matrix. Rows index the sector oil leaves from,
// columns the sector it moves to, so a state row-vector s evolves as s * M.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

  static Matrix identity(std::size_t n);

  std::size_t size() const { return n_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * n_, n_};
  }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

// a * b; throws std::invalid_argument on dimension mismatch.
Matrix multiply(const Matrix& a, const Matrix& b);

// Row-vector product: out[k] = sum_i v[i] * m(i, k).
std::vector<double> left_multiply(std::span<const double> v, const Matrix& m);

// Column-vector product: out[i] = sum_k m(i, k) * v[k].
std::vector<double> right_multiply(const Matrix& m, std::span<const double> v);

// True when all entries are >= -tol and each row sums to 1 within tol.
bool is_row_stochastic(const Matrix& m, double tol = 1e-9);

double max_abs_diff(const Matrix& a, const Matrix& b);

}  // namespace spillplan
