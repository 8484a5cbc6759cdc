#include "seal/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstring>

namespace seal::kernels {

namespace {

void check_mul_shapes(const Matrix& a, const Matrix& b, int ak, int bk,
                      const char* what) {
  if (ak != bk)
    throw dim_error(std::string(what) + ": incompatible shapes " + a.shape_str() +
                    " and " + b.shape_str());
}

// One output row of C = A·B, ikj order. Zero entries of A are skipped: the
// adjacency-shaped operands this library multiplies are mostly zeros, and
// x + 0.0 == x for finite x, so skipping cannot change the result.
inline void matmul_row(const double* a_row, const Matrix& b, double* c_row) {
  const int K = b.rows, N = b.cols;
  std::fill(c_row, c_row + N, 0.0);
  for (int k = 0; k < K; ++k) {
    const double aik = a_row[k];
    if (aik == 0.0) continue;
    const double* b_row = b.row_ptr(k);
    for (int j = 0; j < N; ++j) c_row[j] += aik * b_row[j];
  }
}

// One output row of C = Aᵀ·B: C[k,:] = Σ_i A[i,k]·B[i,:].
inline void matmul_at_b_row(const Matrix& a, const Matrix& b, int k, double* c_row) {
  const int I = a.rows, N = b.cols;
  std::fill(c_row, c_row + N, 0.0);
  for (int i = 0; i < I; ++i) {
    const double aik = a(i, k);
    if (aik == 0.0) continue;
    const double* b_row = b.row_ptr(i);
    for (int j = 0; j < N; ++j) c_row[j] += aik * b_row[j];
  }
}

// One output row of C = A·Bᵀ: C[i,j] = Σ_k A[i,k]·B[j,k].
inline void matmul_a_bt_row(const double* a_row, const Matrix& b, double* c_row) {
  const int J = b.rows, K = b.cols;
  for (int j = 0; j < J; ++j) {
    const double* b_row = b.row_ptr(j);
    double acc = 0.0;
    for (int k = 0; k < K; ++k) acc += a_row[k] * b_row[k];
    c_row[j] = acc;
  }
}

inline void softmax_row(const double* in, double* out, int n) {
  double mx = in[0];
  for (int j = 1; j < n; ++j) mx = std::max(mx, in[j]);
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    out[j] = std::exp(in[j] - mx);
    sum += out[j];
  }
  const double inv = 1.0 / sum;
  for (int j = 0; j < n; ++j) out[j] *= inv;
}

// Parallelising tiny products costs more than it saves.
inline bool worth_parallel(size_t flops) { return flops >= (1u << 16); }

}  // namespace

namespace serial {

void matmul(const Matrix& a, const Matrix& b, Matrix& out) {
  check_mul_shapes(a, b, a.cols, b.rows, "matmul");
  out = Matrix(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i) matmul_row(a.row_ptr(i), b, out.row_ptr(i));
}

void matmul_at_b(const Matrix& a, const Matrix& b, Matrix& out) {
  check_mul_shapes(a, b, a.rows, b.rows, "matmul_at_b");
  out = Matrix(a.cols, b.cols);
  for (int k = 0; k < a.cols; ++k) matmul_at_b_row(a, b, k, out.row_ptr(k));
}

void matmul_a_bt(const Matrix& a, const Matrix& b, Matrix& out) {
  check_mul_shapes(a, b, a.cols, b.cols, "matmul_a_bt");
  out = Matrix(a.rows, b.rows);
  for (int i = 0; i < a.rows; ++i) matmul_a_bt_row(a.row_ptr(i), b, out.row_ptr(i));
}

void relu(const Matrix& m, Matrix& out) {
  out = Matrix(m.rows, m.cols);
  for (size_t i = 0; i < m.size(); ++i) out.data[i] = m.data[i] > 0.0 ? m.data[i] : 0.0;
}

void tanh(const Matrix& m, Matrix& out) {
  out = Matrix(m.rows, m.cols);
  for (size_t i = 0; i < m.size(); ++i) out.data[i] = std::tanh(m.data[i]);
}

void softmax_rows(const Matrix& m, Matrix& out) {
  out = Matrix(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i) softmax_row(m.row_ptr(i), out.row_ptr(i), m.cols);
}

}  // namespace serial

void matmul(const Matrix& a, const Matrix& b, Matrix& out) {
  check_mul_shapes(a, b, a.cols, b.rows, "matmul");
  out = Matrix(a.rows, b.cols);
  const size_t flops = static_cast<size_t>(a.rows) * a.cols * b.cols;
  if (!worth_parallel(flops) || omp_in_parallel()) {
    for (int i = 0; i < a.rows; ++i) matmul_row(a.row_ptr(i), b, out.row_ptr(i));
    return;
  }
#pragma omp parallel for schedule(static)
  for (int i = 0; i < a.rows; ++i) matmul_row(a.row_ptr(i), b, out.row_ptr(i));
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  Matrix out;
  matmul(a, b, out);
  return out;
}

void matmul_at_b(const Matrix& a, const Matrix& b, Matrix& out) {
  check_mul_shapes(a, b, a.rows, b.rows, "matmul_at_b");
  out = Matrix(a.cols, b.cols);
  const size_t flops = static_cast<size_t>(a.rows) * a.cols * b.cols;
  if (!worth_parallel(flops) || a.cols < 8 || omp_in_parallel()) {
    for (int k = 0; k < a.cols; ++k) matmul_at_b_row(a, b, k, out.row_ptr(k));
    return;
  }
#pragma omp parallel for schedule(static)
  for (int k = 0; k < a.cols; ++k) matmul_at_b_row(a, b, k, out.row_ptr(k));
}

Matrix matmul_at_b(const Matrix& a, const Matrix& b) {
  Matrix out;
  matmul_at_b(a, b, out);
  return out;
}

void matmul_a_bt(const Matrix& a, const Matrix& b, Matrix& out) {
  check_mul_shapes(a, b, a.cols, b.cols, "matmul_a_bt");
  out = Matrix(a.rows, b.rows);
  const size_t flops = static_cast<size_t>(a.rows) * a.cols * b.rows;
  if (!worth_parallel(flops) || omp_in_parallel()) {
    for (int i = 0; i < a.rows; ++i) matmul_a_bt_row(a.row_ptr(i), b, out.row_ptr(i));
    return;
  }
#pragma omp parallel for schedule(static)
  for (int i = 0; i < a.rows; ++i) matmul_a_bt_row(a.row_ptr(i), b, out.row_ptr(i));
}

Matrix matmul_a_bt(const Matrix& a, const Matrix& b) {
  Matrix out;
  matmul_a_bt(a, b, out);
  return out;
}

Matrix transpose(const Matrix& m) {
  Matrix out(m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) out(j, i) = m(i, j);
  return out;
}

Matrix add(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b))
    throw dim_error("add: shapes " + a.shape_str() + " and " + b.shape_str());
  Matrix out(a.rows, a.cols);
  for (size_t i = 0; i < a.size(); ++i) out.data[i] = a.data[i] + b.data[i];
  return out;
}

Matrix sub(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b))
    throw dim_error("sub: shapes " + a.shape_str() + " and " + b.shape_str());
  Matrix out(a.rows, a.cols);
  for (size_t i = 0; i < a.size(); ++i) out.data[i] = a.data[i] - b.data[i];
  return out;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b))
    throw dim_error("hadamard: shapes " + a.shape_str() + " and " + b.shape_str());
  Matrix out(a.rows, a.cols);
  for (size_t i = 0; i < a.size(); ++i) out.data[i] = a.data[i] * b.data[i];
  return out;
}

Matrix scale(const Matrix& a, double s) {
  Matrix out(a.rows, a.cols);
  for (size_t i = 0; i < a.size(); ++i) out.data[i] = a.data[i] * s;
  return out;
}

Matrix relu(const Matrix& m) {
  Matrix out;
  serial::relu(m, out);
  return out;
}

Matrix tanh(const Matrix& m) {
  Matrix out;
  serial::tanh(m, out);
  return out;
}

Matrix softmax_rows(const Matrix& m) {
  for (double x : m.data)
    if (!std::isfinite(x)) throw numeric_error("softmax_rows: non-finite input");
  Matrix out;
  serial::softmax_rows(m, out);
  return out;
}

double cross_entropy(std::span<const double> pred, int label) {
  if (label < 0 || label >= static_cast<int>(pred.size()))
    throw index_error("cross_entropy: label " + std::to_string(label) +
                      " out of range for " + std::to_string(pred.size()) + " classes");
  double sum = 0.0;
  for (double p : pred) sum += p;
  if (std::abs(sum - 1.0) > 1e-6)
    throw numeric_error("cross_entropy: probabilities sum to " + std::to_string(sum));
  return -std::log(std::max(pred[label], kProbFloor));
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size())
    throw dim_error("kl_divergence: lengths " + std::to_string(p.size()) + " and " +
                    std::to_string(q.size()));
  double sp = 0.0, sq = 0.0;
  for (size_t j = 0; j < p.size(); ++j) {
    sp += p[j];
    sq += q[j];
  }
  if (std::abs(sp - 1.0) > 1e-6 || std::abs(sq - 1.0) > 1e-6)
    throw numeric_error("kl_divergence: rows must sum to 1");
  double kl = 0.0;
  for (size_t j = 0; j < p.size(); ++j) {
    if (p[j] <= 0.0) continue;  // 0·ln0 = 0
    kl += p[j] * std::log(p[j] / std::max(q[j], kProbFloor));
  }
  return kl;
}

double frobenius_norm_sq(const Matrix& m) {
  double s = 0.0;
  for (double x : m.data) s += x * x;
  return s;
}

Matrix dropout(const Matrix& m, double rate, bool training, Rng& rng,
               Matrix* mask_out) {
  if (rate < 0.0 || rate >= 1.0)
    throw config_error("dropout: rate must be in [0,1), got " + std::to_string(rate));
  if (!training || rate == 0.0) {
    if (mask_out) *mask_out = Matrix(m.rows, m.cols, 1.0);
    return m;
  }
  const double scale = 1.0 / (1.0 - rate);
  Matrix mask(m.rows, m.cols);
  Matrix out(m.rows, m.cols);
  for (size_t i = 0; i < m.size(); ++i) {
    const double keep = rng.bernoulli(rate) ? 0.0 : scale;
    mask.data[i] = keep;
    out.data[i] = m.data[i] * keep;
  }
  if (mask_out) *mask_out = std::move(mask);
  return out;
}

Matrix he_normal_init(int rows, int cols, Rng& rng) {
  Matrix m(rows, cols);
  const double stddev = std::sqrt(2.0 / rows);
  for (double& x : m.data) x = stddev * rng.normal();
  return m;
}

}  // namespace seal::kernels
