#pragma once

#include <span>
#include <vector>

#include "seal/autodiff.hpp"
#include "seal/graph.hpp"
#include "seal/matrix.hpp"
#include "seal/rng.hpp"

namespace seal {

struct SageDims {
  int in_features = 0;   // feature width of instance nodes
  int gcn_hidden = 32;   // first GCN layer width
  int gcn_out = 4;       // node representation width
  int att_hidden = 32;   // attention hidden width
  int att_views = 10;    // independent attention views
  int dense_units = 48;  // dense head width
  int classes = 0;

  int embedding_width() const { return att_views * gcn_out; }
};

// All trainable weights of the instance classifier. No bias terms anywhere.
struct SageParams {
  SageDims dims;
  double dropout_rate = 0.5;
  double penalty_coeff = 0.15;

  Matrix w_gcn0;   // in_features × gcn_hidden
  Matrix w_gcn1;   // gcn_hidden × gcn_out
  Matrix w_att1;   // att_hidden × gcn_out
  Matrix w_att2;   // att_views × att_hidden
  Matrix w_dense;  // (att_views·gcn_out) × dense_units
  Matrix w_out;    // dense_units × classes

  static SageParams init(const SageDims& dims, double dropout_rate,
                         double penalty_coeff, Rng& rng);

  std::vector<Matrix*> weights();
  std::vector<const Matrix*> weights() const;
};

struct SageOutput {
  Matrix node_repr;  // n × gcn_out
  Matrix attention;  // att_views × n, each row sums to 1
  Matrix embedding;  // att_views × gcn_out, independent of n
  Matrix psi;        // 1 × classes probability row
  double penalty;    // ‖SSᵀ - I‖²_F over the attention rows
};

// Forward pass over one instance. rng is only consulted when training with a
// nonzero dropout rate.
SageOutput sage_forward(const SageParams& params, const NormalizedAdjacency& a_hat,
                        const Matrix& features, bool training, Rng* rng);

struct TrainExample {
  const GraphInstance* g = nullptr;
  int label = -1;
};

namespace detail {

// Tape handles for the six weight matrices.
struct SageVars {
  ad::Var w_gcn0, w_gcn1, w_att1, w_att2, w_dense, w_out;
  std::vector<ad::Var> list() const {
    return {w_gcn0, w_gcn1, w_att1, w_att2, w_dense, w_out};
  }
};

SageVars add_sage_params(ad::Tape& tape, const SageParams& params, bool tracked);

// Cross-entropy plus weighted attention penalty for one instance.
ad::Var sage_instance_loss(ad::Tape& tape, const SageVars& vars, const SageParams& params,
                           const Matrix& a_hat, const Matrix& features, int label,
                           bool training, Rng* rng);

}  // namespace detail

// Batch loss Σ (cross-entropy + penalty_coeff·penalty) on a single tape.
// Every example must be labeled.
ad::Var sage_loss(ad::Tape& tape, const detail::SageVars& vars, const SageParams& params,
                  std::span<const TrainExample> batch, bool training, Rng* rng);

struct TrainConfig {
  int epochs = 200;
  int batch_size = 32;
  double lr = 0.01;
};

struct TrainReport {
  std::vector<double> epoch_loss;
};

// Minibatch Adam on sage_loss. Deterministic under a fixed rng state for any
// thread count: per-example gradients are computed in parallel but reduced
// in batch order, and dropout streams are derived per (epoch, slot).
TrainReport train_ic(SageParams& params, const std::vector<TrainExample>& examples,
                     const TrainConfig& cfg, Rng& rng);

// Same update rule as train_ic but starting from the incoming parameters;
// cfg.epochs carries the fine-tuning epoch count.
TrainReport fine_tune_ic(SageParams& params, const std::vector<TrainExample>& examples,
                         const TrainConfig& cfg, Rng& rng);

// Convenience: examples from instances that carry their own labels.
std::vector<TrainExample> examples_from(const HierarchicalGraph& hg,
                                        const std::vector<int>& ids);

struct EmbedResult {
  Matrix embeddings;              // count × (att_views·gcn_out)
  Matrix psi;                     // count × classes
  std::vector<Matrix> attention;  // per instance, att_views × n_i
};

// Evaluation-mode forward over every instance of the hierarchical graph.
EmbedResult embed_all(const SageParams& params, const HierarchicalGraph& hg);

}  // namespace seal
