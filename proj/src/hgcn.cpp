#include "seal/hgcn.hpp"

#include "seal/kernels.hpp"
#include "seal/optim.hpp"

namespace seal {

namespace k = seal::kernels;

HcParams HcParams::init(int in_dim, int hidden, int classes, Rng& rng) {
  if (in_dim < 1 || hidden < 1 || classes < 1)
    throw config_error("HcParams: all dimensions must be positive");
  HcParams p;
  p.in_dim = in_dim;
  p.hidden = hidden;
  p.classes = classes;
  p.w0 = k::he_normal_init(in_dim, hidden, rng);
  p.w1 = k::he_normal_init(hidden, classes, rng);
  return p;
}

Matrix hc_forward(const HcParams& params, const Matrix& embeddings,
                  const NormalizedAdjacency& theta_hat) {
  if (embeddings.cols != params.in_dim)
    throw dim_error("hc_forward: embeddings are " + embeddings.shape_str() +
                    " but the model expects width " + std::to_string(params.in_dim));
  if (theta_hat.m.rows != embeddings.rows)
    throw dim_error("hc_forward: theta is " + theta_hat.m.shape_str() + " for " +
                    std::to_string(embeddings.rows) + " instances");
  Matrix ew = k::matmul(embeddings, params.w0);
  Matrix h = k::relu(k::matmul(theta_hat.m, ew));
  Matrix hw = k::matmul(h, params.w1);
  return k::softmax_rows(k::matmul(theta_hat.m, hw));
}

double hc_loss(const HcParams& params, const Matrix& embeddings,
               const NormalizedAdjacency& theta_hat, const std::vector<int>& labeled_ids,
               const std::vector<int>& labels) {
  if (labeled_ids.empty()) throw usage_error("hc_loss: empty labeled set");
  if (labeled_ids.size() != labels.size())
    throw usage_error("hc_loss: id/label count mismatch");
  Matrix gamma = hc_forward(params, embeddings, theta_hat);
  double total = 0.0;
  for (size_t i = 0; i < labeled_ids.size(); ++i)
    total += k::cross_entropy(gamma.row(labeled_ids[i]), labels[i]);
  return total;
}

namespace detail {

HcVars add_hc_params(ad::Tape& tape, const HcParams& params, bool tracked) {
  HcVars v;
  v.w0 = tracked ? tape.input(params.w0) : tape.constant(params.w0);
  v.w1 = tracked ? tape.input(params.w1) : tape.constant(params.w1);
  return v;
}

ad::Var hc_gamma(ad::Tape& tape, const HcVars& vars, const Matrix* embeddings,
                 const Matrix* theta_hat) {
  ad::Var e = tape.constant_ref(embeddings);
  ad::Var t = tape.constant_ref(theta_hat);
  ad::Var ew = tape.matmul(e, vars.w0);
  ad::Var h = tape.relu(tape.matmul_symlhs(t, ew));
  ad::Var hw = tape.matmul(h, vars.w1);
  return tape.softmax_rows(tape.matmul_symlhs(t, hw));
}

ad::Var hc_loss_var(ad::Tape& tape, const HcVars& vars, const Matrix* embeddings,
                    const Matrix* theta_hat, const std::vector<int>& labeled_ids,
                    const std::vector<int>& labels) {
  if (labeled_ids.empty()) throw usage_error("hc_loss: empty labeled set");
  if (labeled_ids.size() != labels.size())
    throw usage_error("hc_loss: id/label count mismatch");
  ad::Var gamma = hc_gamma(tape, vars, embeddings, theta_hat);
  return tape.cross_entropy_rows(gamma, labeled_ids, labels);
}

}  // namespace detail

TrainReport train_hc(HcParams& params, const Matrix& embeddings,
                     const NormalizedAdjacency& theta_hat,
                     const std::vector<int>& labeled_ids, const std::vector<int>& labels,
                     const HcTrainConfig& cfg, Rng& rng) {
  (void)rng;  // training is full-batch and deterministic; kept for interface symmetry
  if (labeled_ids.empty()) throw usage_error("train_hc: empty labeled set");
  if (labeled_ids.size() != labels.size())
    throw usage_error("train_hc: id/label count mismatch");

  TrainReport report;
  if (cfg.epochs == 0) return report;

  auto weight_ptrs = params.weights();
  std::vector<const Matrix*> weight_view(weight_ptrs.begin(), weight_ptrs.end());
  AdamState opt = AdamState::init(weight_view, AdamConfig{.lr = cfg.lr});

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    ad::Tape tape;
    detail::HcVars vars = detail::add_hc_params(tape, params, true);
    ad::Var loss =
        detail::hc_loss_var(tape, vars, &embeddings, &theta_hat.m, labeled_ids, labels);
    tape.backward(loss);
    report.epoch_loss.push_back(tape.value(loss)(0, 0));
    Matrix g0 = tape.grad_of(vars.w0);
    Matrix g1 = tape.grad_of(vars.w1);
    adam_step(weight_ptrs, {&g0, &g1}, opt);
  }
  return report;
}

}  // namespace seal
