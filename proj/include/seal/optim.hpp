#pragma once

#include <functional>
#include <vector>

#include "seal/matrix.hpp"

namespace seal {

struct AdamConfig {
  double lr = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// First/second-moment accumulators, one pair per parameter matrix.
struct AdamState {
  AdamConfig cfg;
  std::vector<Matrix> m, v;
  long t = 0;

  static AdamState init(const std::vector<const Matrix*>& params, AdamConfig cfg = {});
};

// In-place Adam update with bias correction; increments state.t by 1.
void adam_step(const std::vector<Matrix*>& params,
               const std::vector<const Matrix*>& grads, AdamState& state);

// Central-difference gradient check. f must be deterministic. Compares the
// supplied analytic gradients entrywise against (f(x+h)-f(x-h))/2h and
// returns the max relative error with denominator max(|fd|,|an|,1e-8).
double finite_diff_check(const std::function<double(const std::vector<Matrix>&)>& f,
                         std::vector<Matrix> params,
                         const std::vector<Matrix>& analytic, double step);

}  // namespace seal
