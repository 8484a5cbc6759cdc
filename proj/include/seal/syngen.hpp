#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "seal/graph.hpp"
#include "seal/rng.hpp"

namespace seal::syngen {

// The seven instance families; the enum value is the class index.
enum class FamilyKind {
  WattsStrogatz = 0,
  Tree = 1,
  ErdosRenyi = 2,
  Barbell = 3,
  Bipartite = 4,
  BarabasiAlbert = 5,
  Path = 6,
};

inline constexpr int kFamilyCount = 7;

const char* family_name(FamilyKind kind);

struct GenConfig {
  int size_min = 100, size_max = 200;
  double p_min = 0.1, p_max = 0.5;
  int branch_min = 1, branch_max = 3;
  double removal_min = 0.01, removal_max = 0.20;
  uint64_t seed = 0;
  int feature_scheme = 0;

  // Family parameterisation left open by the size/p ranges alone.
  int ws_ring_degree = 4;               // lattice degree before rewiring
  double bipartite_small_part = 0.25;   // fraction of nodes in the small part
  double ba_attach_offset = 2.0;        // preferential attachment m = round(offset + 4p)
  int ba_attach_min = 2, ba_attach_max = 4;
};

// Instance-level topology: adjacency for theta plus one family class per node.
struct Skeleton {
  int n = 0;
  std::vector<std::pair<int, int>> edges;  // undirected, deduplicated, i < j
  std::vector<int> classes;
  std::vector<std::string> class_names;  // class index -> source token, when known
  int self_loops_dropped = 0;
};

// Parses an edge file (whitespace-separated id pairs, one per line) and a
// class file (id and class token per line). String ids map to dense indices
// in class-file order; class tokens map to family indices in first-appearance
// order. Self-loop lines are dropped and counted.
Skeleton load_citation_skeleton(const std::filesystem::path& edges_file,
                                const std::filesystem::path& classes_file);

// Stochastic-block-model skeleton: nodes grouped by class, intra-/inter-class
// edge probabilities as given.
Skeleton synth_skeleton(const std::vector<int>& class_sizes, double intra_p,
                        double inter_p, Rng& rng);

// Default class sizes of the citation-network skeleton (sum 2708).
const std::vector<int>& default_class_sizes();

// Edge probabilities giving the requested mean degree with the requested
// fraction of intra-class edges, for a block model over these class sizes.
std::pair<double, double> skeleton_probabilities(const std::vector<int>& class_sizes,
                                                 double mean_degree,
                                                 double intra_fraction);

// Rescales class sizes to a fraction of their total (largest-remainder
// rounding, exact total).
std::vector<int> scale_class_sizes(const std::vector<int>& sizes, double factor);

// One instance: size drawn from [size_min,size_max], structure per family,
// then a removal fraction drawn from [removal_min,removal_max] applied
// edgewise. Features are not assigned here.
GraphInstance generate_instance(FamilyKind kind, const GenConfig& cfg, Rng& rng);

// Scheme 0 (the default): per node [degree/n, local clustering coefficient, 1].
void assign_features(GraphInstance& g, int scheme);

// One instance per skeleton node, family given by the node class, theta from
// the skeleton edges. Instance i derives its RNG stream from (cfg.seed, i),
// so generation is reproducible regardless of scheduling.
HierarchicalGraph generate_dataset(const Skeleton& skeleton, const GenConfig& cfg);

struct FamilyStats {
  FamilyKind kind;
  int count = 0;
  double mean_nodes = 0.0;
  double mean_edges = 0.0;
  double mean_density = 0.0;
};

std::vector<FamilyStats> dataset_stats(const HierarchicalGraph& hg);

}  // namespace seal::syngen
