#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "seal/graph.hpp"
#include "seal/hgcn.hpp"
#include "seal/sage.hpp"
#include "seal/seal_loop.hpp"

namespace seal::io {

inline constexpr int kDatasetFormatVersion = 1;

// Writes manifest.json, instances.txt and theta.txt into the directory
// (created if needed). extra_manifest entries are merged into the manifest.
// Files are written atomically and floats with shortest round-trip decimals,
// so save/load is the identity and identical inputs give identical bytes.
void save_dataset(const HierarchicalGraph& hg, const std::filesystem::path& dir,
                  const nlohmann::json& extra_manifest = {});

struct LoadedDataset {
  HierarchicalGraph hg;
  nlohmann::json manifest;
};

LoadedDataset load_dataset(const std::filesystem::path& dir);

// Reads the four-file multi-graph benchmark convention:
//   <name>_A.txt               edge list "i, j", 1-based global node ids
//   <name>_graph_indicator.txt node -> graph id
//   <name>_graph_labels.txt    graph labels (remapped to 0-based)
//   <name>_node_labels.txt     and/or <name>_node_attributes.txt
// Node labels are one-hot encoded, attributes used as-is, concatenated when
// both are present. Graphs have no instance-level links.
std::vector<GraphInstance> load_tu_dataset(const std::filesystem::path& dir,
                                           const std::string& name);

void export_embeddings(const Matrix& embeddings, const Matrix& psi,
                       const std::vector<int>& truth, const std::vector<int>& predicted,
                       const std::filesystem::path& path);

// Attention averaged across views, renormalized to sum 1, one row per node
// with its degree.
void export_attention(const GraphInstance& g, const Matrix& attention,
                      const std::filesystem::path& path);

void export_history(const std::vector<IterationRecord>& history,
                    const std::filesystem::path& path);

void save_params(const SageParams& sage, const HcParams& hc,
                 const std::filesystem::path& path);

struct LoadedParams {
  SageParams sage;
  HcParams hc;
};

LoadedParams load_params(const std::filesystem::path& path);

// Shortest decimal that round-trips to the same double.
std::string fmt_double(double x);

}  // namespace seal::io
