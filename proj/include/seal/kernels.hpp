#pragma once

#include <span>

#include "seal/matrix.hpp"
#include "seal/rng.hpp"

namespace seal::kernels {

// Serial reference implementations. These are the ground truth the OpenMP
// kernels are tested against (bitwise) and benchmarked by tools/bench_kernels.
namespace serial {

void matmul(const Matrix& a, const Matrix& b, Matrix& out);
// out = aᵀ·b
void matmul_at_b(const Matrix& a, const Matrix& b, Matrix& out);
// out = a·bᵀ
void matmul_a_bt(const Matrix& a, const Matrix& b, Matrix& out);
void relu(const Matrix& m, Matrix& out);
void tanh(const Matrix& m, Matrix& out);
void softmax_rows(const Matrix& m, Matrix& out);

}  // namespace serial

// OpenMP kernels. Work is partitioned by output row and each row is computed
// by the same serial routine, so results are bitwise identical to the serial
// reference for any thread count. Small problems fall through to serial.
void matmul(const Matrix& a, const Matrix& b, Matrix& out);
Matrix matmul(const Matrix& a, const Matrix& b);
void matmul_at_b(const Matrix& a, const Matrix& b, Matrix& out);
Matrix matmul_at_b(const Matrix& a, const Matrix& b);
void matmul_a_bt(const Matrix& a, const Matrix& b, Matrix& out);
Matrix matmul_a_bt(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& m);
Matrix add(const Matrix& a, const Matrix& b);
Matrix sub(const Matrix& a, const Matrix& b);
Matrix hadamard(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& a, double s);

Matrix relu(const Matrix& m);
Matrix tanh(const Matrix& m);

// Row-wise softmax with max-subtraction. Throws numeric_error on non-finite
// input.
Matrix softmax_rows(const Matrix& m);

// -log(pred[label]) with pred clamped below at kProbFloor.
inline constexpr double kProbFloor = 1e-12;
double cross_entropy(std::span<const double> pred, int label);

// Σ p·ln(p/q) with 0·ln0 = 0 and q clamped below at kProbFloor. Both rows
// must sum to 1 within 1e-6.
double kl_divergence(std::span<const double> p, std::span<const double> q);

double frobenius_norm_sq(const Matrix& m);

// Inverted dropout: in training mode zeroes entries with probability `rate`
// and scales survivors by 1/(1-rate); identity in evaluation mode. If
// mask_out is non-null it receives the scaled keep-mask.
Matrix dropout(const Matrix& m, double rate, bool training, Rng& rng,
               Matrix* mask_out = nullptr);

// i.i.d. N(0, 2/rows) entries; rows is the fan-in.
Matrix he_normal_init(int rows, int cols, Rng& rng);

}  // namespace seal::kernels
