#include "spillplan/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spillplan {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("matrix dimension mismatch");
  }
  const std::size_t n = a.size();
  Matrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double aij = a(i, j);
      if (aij == 0.0) continue;
      for (std::size_t k = 0; k < n; ++k) out(i, k) += aij * b(j, k);
    }
  }
  return out;
}

std::vector<double> left_multiply(std::span<const double> v, const Matrix& m) {
  if (v.size() != m.size()) {
    throw std::invalid_argument("vector/matrix dimension mismatch");
  }
  const std::size_t n = m.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (v[i] == 0.0) continue;
    const auto r = m.row(i);
    for (std::size_t k = 0; k < n; ++k) out[k] += v[i] * r[k];
  }
  return out;
}

std::vector<double> right_multiply(const Matrix& m, std::span<const double> v) {
  if (v.size() != m.size()) {
    throw std::invalid_argument("vector/matrix dimension mismatch");
  }
  const std::size_t n = m.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = m.row(i);
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += r[k] * v[k];
    out[i] = acc;
  }
  return out;
}

bool is_row_stochastic(const Matrix& m, double tol) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    double sum = 0.0;
    for (double x : m.row(i)) {
      if (x < -tol) return false;
      sum += x;
    }
    if (std::abs(sum - 1.0) > tol) return false;
  }
  return true;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("matrix dimension mismatch");
  }
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < a.size(); ++k)
      d = std::max(d, std::abs(a(i, k) - b(i, k)));
  return d;
}

}  // namespace spillplan
