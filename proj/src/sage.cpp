#include "seal/sage.hpp"

#include <omp.h>

#include <algorithm>
#include <numeric>

#include "seal/kernels.hpp"
#include "seal/optim.hpp"

namespace seal {

namespace k = seal::kernels;

SageParams SageParams::init(const SageDims& dims, double dropout_rate,
                            double penalty_coeff, Rng& rng) {
  if (dims.in_features < 1 || dims.gcn_hidden < 1 || dims.gcn_out < 1 ||
      dims.att_hidden < 1 || dims.att_views < 1 || dims.dense_units < 1 ||
      dims.classes < 1)
    throw config_error("SageParams: all dimensions must be positive");
  if (dropout_rate < 0.0 || dropout_rate >= 1.0)
    throw config_error("SageParams: dropout rate must be in [0,1)");
  if (penalty_coeff < 0.0)
    throw config_error("SageParams: penalty coefficient must be nonnegative");
  SageParams p;
  p.dims = dims;
  p.dropout_rate = dropout_rate;
  p.penalty_coeff = penalty_coeff;
  p.w_gcn0 = k::he_normal_init(dims.in_features, dims.gcn_hidden, rng);
  p.w_gcn1 = k::he_normal_init(dims.gcn_hidden, dims.gcn_out, rng);
  p.w_att1 = k::he_normal_init(dims.att_hidden, dims.gcn_out, rng);
  p.w_att2 = k::he_normal_init(dims.att_views, dims.att_hidden, rng);
  p.w_dense = k::he_normal_init(dims.embedding_width(), dims.dense_units, rng);
  p.w_out = k::he_normal_init(dims.dense_units, dims.classes, rng);
  return p;
}

std::vector<Matrix*> SageParams::weights() {
  return {&w_gcn0, &w_gcn1, &w_att1, &w_att2, &w_dense, &w_out};
}

std::vector<const Matrix*> SageParams::weights() const {
  return {&w_gcn0, &w_gcn1, &w_att1, &w_att2, &w_dense, &w_out};
}

SageOutput sage_forward(const SageParams& params, const NormalizedAdjacency& a_hat,
                        const Matrix& features, bool training, Rng* rng) {
  const SageDims& d = params.dims;
  if (features.cols != d.in_features)
    throw dim_error("sage_forward: features are " + features.shape_str() +
                    " but the model expects width " + std::to_string(d.in_features));
  if (training && params.dropout_rate > 0.0 && rng == nullptr)
    throw usage_error("sage_forward: training mode with dropout needs an rng");

  // Two-layer GCN; the second propagation is applied after the width
  // reduction, which is the cheaper association of the same product.
  Matrix ax = k::matmul(a_hat.m, features);
  Matrix h1 = k::relu(k::matmul(ax, params.w_gcn0));
  Matrix hw = k::matmul(h1, params.w_gcn1);
  Matrix h = k::matmul(a_hat.m, hw);

  // Self-attentive pooling: att_views importance distributions over nodes.
  Matrix ht = k::transpose(h);
  Matrix t1 = k::tanh(k::matmul(params.w_att1, ht));
  Matrix s = k::softmax_rows(k::matmul(params.w_att2, t1));
  Matrix e = k::matmul(s, h);

  Matrix gram = k::matmul(s, k::transpose(s));
  const double penalty =
      k::frobenius_norm_sq(k::sub(gram, Matrix::identity(d.att_views)));

  Matrix flat(1, d.embedding_width());
  flat.data = e.data;
  Matrix dense = k::relu(k::matmul(flat, params.w_dense));
  if (training && params.dropout_rate > 0.0)
    dense = k::dropout(dense, params.dropout_rate, true, *rng);
  Matrix psi = k::softmax_rows(k::matmul(dense, params.w_out));

  SageOutput out;
  out.node_repr = std::move(h);
  out.attention = std::move(s);
  out.embedding = std::move(e);
  out.psi = std::move(psi);
  out.penalty = penalty;
  return out;
}

namespace detail {

SageVars add_sage_params(ad::Tape& tape, const SageParams& params, bool tracked) {
  auto put = [&](const Matrix& m) { return tracked ? tape.input(m) : tape.constant(m); };
  SageVars v;
  v.w_gcn0 = put(params.w_gcn0);
  v.w_gcn1 = put(params.w_gcn1);
  v.w_att1 = put(params.w_att1);
  v.w_att2 = put(params.w_att2);
  v.w_dense = put(params.w_dense);
  v.w_out = put(params.w_out);
  return v;
}

ad::Var sage_instance_loss(ad::Tape& tape, const SageVars& vars, const SageParams& params,
                           const Matrix& a_hat, const Matrix& features, int label,
                           bool training, Rng* rng) {
  const SageDims& d = params.dims;
  if (features.cols != d.in_features)
    throw dim_error("sage_instance_loss: features are " + features.shape_str() +
                    " but the model expects width " + std::to_string(d.in_features));

  ad::Var a = tape.constant(a_hat);
  ad::Var x = tape.constant(features);

  ad::Var ax = tape.matmul(a, x);
  ad::Var h1 = tape.relu(tape.matmul(ax, vars.w_gcn0));
  ad::Var hw = tape.matmul(h1, vars.w_gcn1);
  ad::Var h = tape.matmul_symlhs(a, hw);

  ad::Var ht = tape.transpose(h);
  ad::Var t1 = tape.tanh(tape.matmul(vars.w_att1, ht));
  ad::Var s = tape.softmax_rows(tape.matmul(vars.w_att2, t1));
  ad::Var e = tape.matmul(s, h);

  ad::Var gram = tape.matmul(s, tape.transpose(s));
  ad::Var eye = tape.constant(Matrix::identity(d.att_views));
  ad::Var penalty = tape.frobenius_sq(tape.sub(gram, eye));

  ad::Var flat = tape.reshape(e, 1, d.embedding_width());
  ad::Var dense = tape.relu(tape.matmul(flat, vars.w_dense));
  if (training && params.dropout_rate > 0.0) {
    if (rng == nullptr)
      throw usage_error("sage_instance_loss: training mode with dropout needs an rng");
    dense = tape.dropout(dense, params.dropout_rate, true, *rng);
  }
  ad::Var psi = tape.softmax_rows(tape.matmul(dense, vars.w_out));

  ad::Var ce = tape.cross_entropy_rows(psi, {0}, {label});
  return tape.add(ce, tape.scale(penalty, params.penalty_coeff));
}

}  // namespace detail

ad::Var sage_loss(ad::Tape& tape, const detail::SageVars& vars, const SageParams& params,
                  std::span<const TrainExample> batch, bool training, Rng* rng) {
  if (batch.empty()) throw usage_error("sage_loss: empty batch");
  ad::Var total;
  bool first = true;
  for (const TrainExample& ex : batch) {
    if (ex.g == nullptr || ex.label < 0)
      throw usage_error("sage_loss: unlabeled instance in batch");
    NormalizedAdjacency a_hat = normalize_adjacency(ex.g->adjacency);
    ad::Var l = detail::sage_instance_loss(tape, vars, params, a_hat.m, ex.g->features,
                                           ex.label, training, rng);
    total = first ? l : tape.add(total, l);
    first = false;
  }
  return total;
}

std::vector<TrainExample> examples_from(const HierarchicalGraph& hg,
                                        const std::vector<int>& ids) {
  std::vector<TrainExample> out;
  out.reserve(ids.size());
  for (int id : ids) {
    const GraphInstance& g = hg.instances.at(id);
    if (!g.label)
      throw usage_error("examples_from: instance " + std::to_string(id) + " has no label");
    out.push_back({&g, *g.label});
  }
  return out;
}

namespace {

struct ExampleGrads {
  std::vector<Matrix> g;
  double loss = 0.0;
};

}  // namespace

TrainReport train_ic(SageParams& params, const std::vector<TrainExample>& examples,
                     const TrainConfig& cfg, Rng& rng) {
  if (examples.empty()) throw usage_error("train_ic: empty labeled set");
  for (const TrainExample& ex : examples)
    if (ex.g == nullptr || ex.label < 0)
      throw usage_error("train_ic: unlabeled instance in training set");
  if (cfg.batch_size < 1) throw config_error("train_ic: batch_size must be positive");

  TrainReport report;
  if (cfg.epochs == 0) return report;

  auto weight_ptrs = params.weights();
  std::vector<const Matrix*> weight_view(weight_ptrs.begin(), weight_ptrs.end());
  AdamState opt = AdamState::init(weight_view, AdamConfig{.lr = cfg.lr});

  const uint64_t dropout_root = rng.next_u64();
  const int n = static_cast<int>(examples.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    for (int start = 0; start < n; start += cfg.batch_size) {
      const int bs = std::min(cfg.batch_size, n - start);
      std::vector<ExampleGrads> per(bs);

#pragma omp parallel for schedule(dynamic)
      for (int bi = 0; bi < bs; ++bi) {
        const TrainExample& ex = examples[order[start + bi]];
        Rng drop = derive_rng(dropout_root, static_cast<uint64_t>(epoch),
                              static_cast<uint64_t>(start + bi));
        ad::Tape tape;
        detail::SageVars vars = detail::add_sage_params(tape, params, true);
        NormalizedAdjacency a_hat = normalize_adjacency(ex.g->adjacency);
        ad::Var loss = detail::sage_instance_loss(tape, vars, params, a_hat.m,
                                                  ex.g->features, ex.label, true, &drop);
        tape.backward(loss);
        per[bi].loss = tape.value(loss)(0, 0);
        per[bi].g.reserve(6);
        for (ad::Var v : vars.list()) per[bi].g.push_back(tape.grad_of(v));
      }

      // Fixed-order reduction keeps the update independent of scheduling.
      std::vector<Matrix> grads;
      grads.reserve(weight_ptrs.size());
      for (const Matrix* w : weight_ptrs) grads.emplace_back(w->rows, w->cols);
      for (int bi = 0; bi < bs; ++bi) {
        epoch_loss += per[bi].loss;
        for (size_t wi = 0; wi < grads.size(); ++wi)
          for (size_t j = 0; j < grads[wi].size(); ++j)
            grads[wi].data[j] += per[bi].g[wi].data[j];
      }
      std::vector<const Matrix*> grad_ptrs;
      grad_ptrs.reserve(grads.size());
      for (const Matrix& g : grads) grad_ptrs.push_back(&g);
      adam_step(weight_ptrs, grad_ptrs, opt);
    }
    report.epoch_loss.push_back(epoch_loss);
  }
  return report;
}

TrainReport fine_tune_ic(SageParams& params, const std::vector<TrainExample>& examples,
                         const TrainConfig& cfg, Rng& rng) {
  return train_ic(params, examples, cfg, rng);
}

EmbedResult embed_all(const SageParams& params, const HierarchicalGraph& hg) {
  const int count = hg.count();
  EmbedResult res;
  res.embeddings = Matrix(count, params.dims.embedding_width());
  res.psi = Matrix(count, params.dims.classes);
  res.attention.resize(count);

#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < count; ++i) {
    const GraphInstance& g = hg.instances[i];
    NormalizedAdjacency a_hat = normalize_adjacency(g.adjacency);
    SageOutput out = sage_forward(params, a_hat, g.features, false, nullptr);
    std::copy(out.embedding.data.begin(), out.embedding.data.end(),
              res.embeddings.row_ptr(i));
    std::copy(out.psi.data.begin(), out.psi.data.end(), res.psi.row_ptr(i));
    res.attention[i] = std::move(out.attention);
  }
  return res;
}

}  // namespace seal
