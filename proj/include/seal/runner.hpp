#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "seal/graph.hpp"
#include "seal/seal_loop.hpp"

namespace seal::run {

enum class Method { Sage, SealCI, SealAI };

const char* method_name(Method m);
Method method_by_name(const std::string& name);

struct PipelineConfig {
  SealConfig seal;     // dims.in_features/classes are filled from the dataset
  int labeled = 300;   // base labeled instances
  int test_count = 1000;
  uint64_t seed = 42;
};

struct PipelineResult {
  Method method;
  Split data_split;
  Matrix psi;    // instance-classifier probabilities for all instances
  Matrix gamma;  // hierarchical probabilities; empty for the Sage baseline
  SageParams ic;
  std::optional<HcParams> hc;
  std::vector<IterationRecord> history;
  std::vector<double> ic_epoch_loss;  // Sage baseline only
  std::vector<int> annotated;
  EmbedResult embed;

  // Headline metrics on the test split: hierarchical predictions for the
  // SEAL methods, instance predictions for the baseline.
  double test_accuracy = 0.0;
  double test_macro_f1 = 0.0;
  double test_accuracy_ic = 0.0;
  double test_macro_f1_ic = 0.0;
};

// Splits, trains the requested method and scores it on the held-out test
// ids. Fully deterministic under cfg.seed.
PipelineResult run_method(Method method, const HierarchicalGraph& hg,
                          const PipelineConfig& cfg);

// Writes metrics.csv, predictions.csv, split.csv, history/train-loss,
// embeddings.csv, annotated.csv (active runs) and params.txt into out_dir.
void write_run_outputs(const PipelineResult& result, const HierarchicalGraph& hg,
                       const std::filesystem::path& out_dir);

std::vector<int> predictions_from_rows(const Matrix& probs, const std::vector<int>& ids);

}  // namespace seal::run
