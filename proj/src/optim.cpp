#include "seal/optim.hpp"

#include <cmath>

#include "seal/errors.hpp"

namespace seal {

AdamState AdamState::init(const std::vector<const Matrix*>& params, AdamConfig cfg) {
  AdamState st;
  st.cfg = cfg;
  st.m.reserve(params.size());
  st.v.reserve(params.size());
  for (const Matrix* p : params) {
    st.m.emplace_back(p->rows, p->cols);
    st.v.emplace_back(p->rows, p->cols);
  }
  return st;
}

void adam_step(const std::vector<Matrix*>& params,
               const std::vector<const Matrix*>& grads, AdamState& state) {
  if (params.size() != grads.size() || params.size() != state.m.size())
    throw dim_error("adam_step: parameter/gradient/state count mismatch");
  state.t += 1;
  const auto& c = state.cfg;
  const double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(state.t));
  for (size_t i = 0; i < params.size(); ++i) {
    Matrix& p = *params[i];
    const Matrix& g = *grads[i];
    Matrix& m = state.m[i];
    Matrix& v = state.v[i];
    if (!p.same_shape(g) || !p.same_shape(m))
      throw dim_error("adam_step: shape mismatch at parameter " + std::to_string(i) +
                      " (" + p.shape_str() + " vs " + g.shape_str() + ")");
    for (size_t j = 0; j < p.size(); ++j) {
      m.data[j] = c.beta1 * m.data[j] + (1.0 - c.beta1) * g.data[j];
      v.data[j] = c.beta2 * v.data[j] + (1.0 - c.beta2) * g.data[j] * g.data[j];
      const double mhat = m.data[j] / bc1;
      const double vhat = v.data[j] / bc2;
      p.data[j] -= c.lr * mhat / (std::sqrt(vhat) + c.eps);
    }
  }
}

double finite_diff_check(const std::function<double(const std::vector<Matrix>&)>& f,
                         std::vector<Matrix> params,
                         const std::vector<Matrix>& analytic, double step) {
  double max_rel = 0.0;
  for (size_t i = 0; i < params.size(); ++i) {
    for (size_t j = 0; j < params[i].size(); ++j) {
      const double orig = params[i].data[j];
      params[i].data[j] = orig + step;
      const double fp = f(params);
      params[i].data[j] = orig - step;
      const double fm = f(params);
      params[i].data[j] = orig;
      const double fd = (fp - fm) / (2.0 * step);
      const double an = analytic[i].data[j];
      const double rel = std::abs(fd - an) / std::max({std::abs(fd), std::abs(an), 1e-8});
      max_rel = std::max(max_rel, rel);
    }
  }
  return max_rel;
}

}  // namespace seal
