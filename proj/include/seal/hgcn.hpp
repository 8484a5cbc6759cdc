#pragma once

#include <vector>

#include "seal/autodiff.hpp"
#include "seal/graph.hpp"
#include "seal/matrix.hpp"
#include "seal/rng.hpp"
#include "seal/sage.hpp"

namespace seal {

// Weights of the hierarchical-level classifier: a two-layer GCN over the
// instance embeddings and the instance-level adjacency.
struct HcParams {
  int in_dim = 0;   // embedding width
  int hidden = 16;  // feature maps
  int classes = 0;

  Matrix w0;  // in_dim × hidden
  Matrix w1;  // hidden × classes

  static HcParams init(int in_dim, int hidden, int classes, Rng& rng);

  std::vector<Matrix*> weights() { return {&w0, &w1}; }
  std::vector<const Matrix*> weights() const { return {&w0, &w1}; }
};

// Row-stochastic predictions for every instance:
// softmax(Θ̂·ReLU(Θ̂·E·W0)·W1) applied row-wise.
Matrix hc_forward(const HcParams& params, const Matrix& embeddings,
                  const NormalizedAdjacency& theta_hat);

// Σ over labeled rows of the cross-entropy against their labels.
double hc_loss(const HcParams& params, const Matrix& embeddings,
               const NormalizedAdjacency& theta_hat, const std::vector<int>& labeled_ids,
               const std::vector<int>& labels);

namespace detail {

struct HcVars {
  ad::Var w0, w1;
};

HcVars add_hc_params(ad::Tape& tape, const HcParams& params, bool tracked);

// Builds Γ on the tape. embeddings/theta_hat are borrowed and must outlive
// the tape.
ad::Var hc_gamma(ad::Tape& tape, const HcVars& vars, const Matrix* embeddings,
                 const Matrix* theta_hat);

ad::Var hc_loss_var(ad::Tape& tape, const HcVars& vars, const Matrix* embeddings,
                    const Matrix* theta_hat, const std::vector<int>& labeled_ids,
                    const std::vector<int>& labels);

}  // namespace detail

struct HcTrainConfig {
  int epochs = 100;
  double lr = 0.01;
};

// Full-batch Adam on hc_loss; the whole theta participates in every step.
TrainReport train_hc(HcParams& params, const Matrix& embeddings,
                     const NormalizedAdjacency& theta_hat,
                     const std::vector<int>& labeled_ids, const std::vector<int>& labels,
                     const HcTrainConfig& cfg, Rng& rng);

}  // namespace seal
