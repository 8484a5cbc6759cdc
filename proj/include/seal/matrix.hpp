#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "seal/errors.hpp"

namespace seal {

// Dense row-major matrix of doubles. Plain value type: copy, move and share
// freely; immutable once handed to another thread.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;

  Matrix(int r, int c, double fill = 0.0) : rows(r), cols(c) {
    if (r < 1 || c < 1)
      throw dim_error("Matrix: dimensions must be positive, got " +
                      std::to_string(r) + "x" + std::to_string(c));
    data.assign(static_cast<size_t>(r) * c, fill);
  }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> r);

  double& operator()(int i, int j) { return data[static_cast<size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return data[static_cast<size_t>(i) * cols + j]; }

  double* row_ptr(int i) { return data.data() + static_cast<size_t>(i) * cols; }
  const double* row_ptr(int i) const { return data.data() + static_cast<size_t>(i) * cols; }

  std::span<const double> row(int i) const { return {row_ptr(i), static_cast<size_t>(cols)}; }

  size_t size() const { return data.size(); }
  bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }

  std::string shape_str() const {
    return std::to_string(rows) + "x" + std::to_string(cols);
  }
};

inline Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> r) {
  const int nr = static_cast<int>(r.size());
  const int nc = static_cast<int>(r.begin()->size());
  Matrix m(nr, nc);
  int i = 0;
  for (const auto& row : r) {
    if (static_cast<int>(row.size()) != nc)
      throw dim_error("Matrix::from_rows: ragged rows");
    int j = 0;
    for (double x : row) m(i, j++) = x;
    ++i;
  }
  return m;
}

inline bool operator==(const Matrix& a, const Matrix& b) {
  return a.rows == b.rows && a.cols == b.cols && a.data == b.data;
}

}  // namespace seal
