#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "seal/matrix.hpp"
#include "seal/rng.hpp"

namespace seal {

// One attributed graph acting as a node of the hierarchical graph.
// adjacency is n×n symmetric 0/1 with zero diagonal; features is n×phi.
struct GraphInstance {
  std::string id;
  Matrix adjacency;
  Matrix features;
  std::optional<int> label;

  int n() const { return adjacency.rows; }
  int phi() const { return features.cols; }
};

// All graph instances plus the instance-level adjacency theta and the
// labeled/unlabeled partition. Immutable after construction by convention.
struct HierarchicalGraph {
  std::vector<GraphInstance> instances;
  Matrix theta;
  std::vector<int> labeled_ids;
  std::vector<int> unlabeled_ids;
  int num_classes = 0;

  int count() const { return static_cast<int>(instances.size()); }
};

// Symmetric, nonnegative; produced by normalize_adjacency/normalize_theta.
struct NormalizedAdjacency {
  Matrix m;
};

// D̃^{-1/2}(A+I)D̃^{-1/2} with D̃ the row sums of A+I. The input must be
// square, symmetric and zero-diagonal.
NormalizedAdjacency normalize_adjacency(const Matrix& a);

NormalizedAdjacency normalize_theta(const HierarchicalGraph& hg);

struct ValidationReport {
  bool ok = true;
  std::string violation;
};

// Checks every structural invariant; reports the first violation found.
ValidationReport validate(const HierarchicalGraph& hg);

struct Split {
  std::vector<int> train_ids;
  std::vector<int> test_ids;
};

// Disjoint train/test id sets drawn without replacement. Every train id must
// carry a ground-truth label.
Split split(const HierarchicalGraph& hg, int labeled_count, int test_count, Rng& rng);

}  // namespace seal
