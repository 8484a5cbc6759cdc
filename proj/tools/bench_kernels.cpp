// Times the serial reference kernels against the OpenMP ones and checks that
// the results agree bitwise. Sizes cover the shapes the models actually hit:
// per-instance propagation products and the full instance-level products.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <vector>

#include "seal/kernels.hpp"
#include "seal/rng.hpp"

using namespace seal;

namespace {

double seconds_of(const std::function<void()>& fn, int reps) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count() / reps;
}

Matrix random_matrix(int rows, int cols, Rng& rng, double sparsity = 0.0) {
  Matrix m(rows, cols);
  for (double& x : m.data)
    x = sparsity > 0.0 && rng.bernoulli(sparsity) ? 0.0 : rng.normal();
  return m;
}

void bench_matmul(const char* label, int n, int k, int p, double sparsity, int reps) {
  Rng rng(1234);
  const Matrix a = random_matrix(n, k, rng, sparsity);
  const Matrix b = random_matrix(k, p, rng);
  Matrix serial_out, omp_out;

  const double ts = seconds_of([&] { kernels::serial::matmul(a, b, serial_out); }, reps);
  const double tp = seconds_of([&] { kernels::matmul(a, b, omp_out); }, reps);
  const bool equal = serial_out == omp_out;
  const double flops = 2.0 * n * k * p;
  std::printf("%-26s %5dx%-5d x %5dx%-5d serial %8.3f ms (%6.2f GF/s)  omp %8.3f ms (%6.2f GF/s)  speedup %4.2fx  bitwise %s\n",
              label, n, k, k, p, ts * 1e3, flops / ts / 1e9, tp * 1e3, flops / tp / 1e9,
              ts / tp, equal ? "OK" : "MISMATCH");
}

void bench_softmax(int rows, int cols, int reps) {
  Rng rng(99);
  const Matrix m = random_matrix(rows, cols, rng);
  Matrix serial_out;
  const double ts = seconds_of([&] { kernels::serial::softmax_rows(m, serial_out); }, reps);
  Matrix omp_out;
  const double tp = seconds_of([&] { omp_out = kernels::softmax_rows(m); }, reps);
  std::printf("%-26s %5dx%-5d             serial %8.3f ms             omp %8.3f ms             speedup %4.2fx  bitwise %s\n",
              "softmax_rows", rows, cols, ts * 1e3, tp * 1e3, ts / tp,
              (serial_out == omp_out) ? "OK" : "MISMATCH");
}

}  // namespace

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());
  bench_matmul("matmul dense small", 150, 150, 32, 0.0, 200);
  bench_matmul("matmul adjacency-like", 150, 150, 32, 0.97, 200);
  bench_matmul("matmul dense mid", 512, 512, 64, 0.0, 20);
  bench_matmul("matmul theta-like", 2708, 2708, 16, 0.9985, 5);
  bench_matmul("matmul tall", 2708, 40, 16, 0.0, 50);
  bench_softmax(2708, 7, 200);
  return 0;
}
