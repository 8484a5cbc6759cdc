#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "seal/graph.hpp"
#include "seal/hgcn.hpp"
#include "seal/matrix.hpp"
#include "seal/sage.hpp"

namespace seal {

// Everything the iterative loops need: model hyperparameters plus the
// cautious (lambda) and active (budget, per_round) schedules.
struct SealConfig {
  SageDims dims;
  double dropout_rate = 0.3;
  double penalty_coeff = 0.15;
  int hc_hidden = 16;

  int lambda = 40;     // pseudo-labels trusted per round
  int budget = 160;    // total annotations
  int per_round = 10;  // annotations per round

  TrainConfig ic_train{.epochs = 200, .batch_size = 32, .lr = 0.01};
  TrainConfig ic_finetune{.epochs = 20, .batch_size = 32, .lr = 0.01};
  HcTrainConfig hc_train{.epochs = 100, .lr = 0.01};

  // When set, HC keeps its parameters across rounds and trains
  // hc_warm_epochs per round after the first instead of restarting.
  bool hc_warm_start = false;
  int hc_warm_epochs = 20;

  // Active loop: retrain the instance classifier from scratch every round
  // instead of fine-tuning it.
  bool ai_retrain_ic = false;
};

struct IterationRecord {
  int round = 0;
  int committed = 0;   // pseudo-labels (cautious) or annotations (active) this round
  int train_size = 0;  // labeled set size the round was fitted on
  double supervised = 0.0;
  double disagreement = 0.0;
  double total = 0.0;
  double eval_accuracy = std::nan("");
  double eval_macro_f1 = std::nan("");
};

// Optional per-round scoring against held-out ground truth.
struct EvalSpec {
  std::vector<int> ids;
  std::vector<int> truth;
};

struct SealResult {
  Matrix psi;    // instance-classifier probabilities, one row per instance
  Matrix gamma;  // hierarchical-classifier probabilities
  SageParams ic;
  HcParams hc;
  std::vector<IterationRecord> history;
  std::vector<int> annotated;  // active loop only
  bool aborted = false;
  std::string abort_reason;
};

// Σ over ids of CE(label, psi_row) + CE(label, gamma_row).
double supervised_loss(const Matrix& psi, const Matrix& gamma,
                       const std::vector<int>& ids, const std::vector<int>& labels);

// Σ over ids of KL(gamma_row ‖ psi_row); gamma is the reference distribution.
double disagreement_loss(const Matrix& psi, const Matrix& gamma,
                         const std::vector<int>& ids);

inline double total_objective(double supervised, double disagreement) {
  return supervised + disagreement;
}

// The `count` pool ids with the largest max class probability in gamma;
// ties broken by ascending id; count clamped to the pool size.
std::vector<int> select_confident(const Matrix& gamma, const std::vector<int>& pool,
                                  int count);

// argmax per row, ties to the lowest class index.
std::vector<int> commit_labels(const Matrix& gamma, const std::vector<int>& ids);

// KL(gamma_row ‖ psi_row) per id, in id order.
std::vector<double> disagreement_scores(const Matrix& psi, const Matrix& gamma,
                                        const std::vector<int>& ids);

// The k ids with the largest scores (ties by ascending id); k clamped.
std::vector<int> select_active(const std::vector<double>& scores,
                               const std::vector<int>& ids, int k);

using LabelOracle = std::function<int(int)>;

// Cautious iteration: each round fine-tunes the instance classifier on the
// base labels plus the currently trusted pseudo-labels, refits the
// hierarchical classifier, and re-selects the min(round·lambda, U) most
// confident predictions over the originally-unlabeled pool. Runs
// ceil(U/lambda)+1 rounds.
SealResult seal_ci(const HierarchicalGraph& hg, const std::vector<int>& base_labeled,
                   const SealConfig& cfg, Rng& rng, const EvalSpec* eval = nullptr);

// Active iteration: each round fits both classifiers on all true labels so
// far, then asks the oracle to annotate the per_round unlabeled instances
// whose classifier disagreement is largest, stopping before the budget would
// be exceeded. floor(budget/per_round) annotation rounds, one extra fit.
SealResult seal_ai(const HierarchicalGraph& hg, const std::vector<int>& base_labeled,
                   const LabelOracle& oracle, const SealConfig& cfg, Rng& rng,
                   const EvalSpec* eval = nullptr);

struct FprPoint {
  int lambda = 0;
  double rate = 0.0;
};

// Fraction of misclassified instances among the lambda most confident
// predictions, for each lambda in the grid.
std::vector<FprPoint> false_prediction_rate(const Matrix& gamma,
                                            const std::vector<int>& pool,
                                            const LabelOracle& truth,
                                            const std::vector<int>& grid);

}  // namespace seal
