#include "seal/syngen.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "seal/errors.hpp"

namespace seal::syngen {

const char* family_name(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::WattsStrogatz: return "watts-strogatz";
    case FamilyKind::Tree: return "tree";
    case FamilyKind::ErdosRenyi: return "erdos-renyi";
    case FamilyKind::Barbell: return "barbell";
    case FamilyKind::Bipartite: return "bipartite";
    case FamilyKind::BarabasiAlbert: return "barabasi-albert";
    case FamilyKind::Path: return "path";
  }
  return "unknown";
}

namespace {

using EdgeSet = std::set<std::pair<int, int>>;

void add_edge(EdgeSet& edges, int a, int b) {
  if (a == b) return;
  if (a > b) std::swap(a, b);
  edges.insert({a, b});
}

EdgeSet ring_lattice(int n, int k) {
  EdgeSet edges;
  for (int i = 0; i < n; ++i)
    for (int j = 1; j <= k / 2; ++j) add_edge(edges, i, (i + j) % n);
  return edges;
}

EdgeSet watts_strogatz(int n, int k, double p, Rng& rng) {
  EdgeSet edges = ring_lattice(n, k);
  for (int i = 0; i < n; ++i) {
    for (int j = 1; j <= k / 2; ++j) {
      const int old_to = (i + j) % n;
      if (!rng.bernoulli(p)) continue;
      const int pick = static_cast<int>(rng.uniform_int(0, n - 1));
      if (pick == i) continue;
      int a = std::min(i, pick), b = std::max(i, pick);
      if (edges.count({a, b})) continue;  // would duplicate: keep the original
      edges.erase({std::min(i, old_to), std::max(i, old_to)});
      edges.insert({a, b});
    }
  }
  return edges;
}

// Largest complete b-ary tree with at most n nodes (full levels only);
// b == 1 degenerates to a path on exactly n nodes.
EdgeSet complete_tree(int n, int branching, int* actual_n) {
  if (branching == 1) {
    EdgeSet edges;
    for (int i = 0; i + 1 < n; ++i) add_edge(edges, i, i + 1);
    *actual_n = n;
    return edges;
  }
  long total = 1, level = 1;
  while (true) {
    level *= branching;
    if (total + level > n) break;
    total += level;
  }
  EdgeSet edges;
  for (long child = 1; child < total; ++child)
    add_edge(edges, static_cast<int>((child - 1) / branching), static_cast<int>(child));
  *actual_n = static_cast<int>(total);
  return edges;
}

EdgeSet erdos_renyi(int n, double p, Rng& rng) {
  EdgeSet edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.bernoulli(p)) edges.insert({i, j});
  return edges;
}

// Two complete graphs of size n/3 joined by a path over the remaining nodes.
EdgeSet barbell(int n) {
  const int m = std::max(1, n / 3);
  const int q = n - 2 * m;
  EdgeSet edges;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) edges.insert({i, j});
  for (int i = m + q; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.insert({i, j});
  for (int t = 0; t + 1 < q; ++t) add_edge(edges, m + t, m + t + 1);
  add_edge(edges, m - 1, m);  // into the path, or directly into the right clique
  if (q > 0) add_edge(edges, m + q - 1, m + q);
  return edges;
}

EdgeSet bipartite(int n, double small_fraction, double p, Rng& rng) {
  const int n1 = std::max(1, static_cast<int>(n * small_fraction));
  EdgeSet edges;
  for (int i = 0; i < n1; ++i)
    for (int j = n1; j < n; ++j)
      if (rng.bernoulli(p)) edges.insert({i, j});
  return edges;
}

EdgeSet barabasi_albert(int n, int attach, Rng& rng) {
  EdgeSet edges;
  std::vector<int> targets(attach);
  for (int i = 0; i < attach; ++i) targets[i] = i;
  std::vector<int> repeated;
  for (int src = attach; src < n; ++src) {
    for (int t : targets) {
      add_edge(edges, src, t);
      repeated.push_back(src);
      repeated.push_back(t);
    }
    std::set<int> next;
    while (static_cast<int>(next.size()) < attach)
      next.insert(repeated[rng.uniform_int(0, static_cast<int64_t>(repeated.size()) - 1)]);
    targets.assign(next.begin(), next.end());
  }
  return edges;
}

EdgeSet path_graph(int n) {
  EdgeSet edges;
  for (int i = 0; i + 1 < n; ++i) edges.insert({i, i + 1});
  return edges;
}

Matrix adjacency_from(const EdgeSet& edges, int n) {
  Matrix a(n, n);
  for (const auto& [i, j] : edges) {
    a(i, j) = 1.0;
    a(j, i) = 1.0;
  }
  return a;
}

}  // namespace

GraphInstance generate_instance(FamilyKind kind, const GenConfig& cfg, Rng& rng) {
  int n = static_cast<int>(rng.uniform_int(cfg.size_min, cfg.size_max));
  const double p = rng.uniform(cfg.p_min, cfg.p_max);

  EdgeSet edges;
  switch (kind) {
    case FamilyKind::WattsStrogatz:
      edges = watts_strogatz(n, cfg.ws_ring_degree, p, rng);
      break;
    case FamilyKind::Tree: {
      const int b = static_cast<int>(rng.uniform_int(cfg.branch_min, cfg.branch_max));
      edges = complete_tree(n, b, &n);
      break;
    }
    case FamilyKind::ErdosRenyi:
      edges = erdos_renyi(n, p, rng);
      break;
    case FamilyKind::Barbell:
      edges = barbell(n);
      break;
    case FamilyKind::Bipartite:
      edges = bipartite(n, cfg.bipartite_small_part, p, rng);
      break;
    case FamilyKind::BarabasiAlbert: {
      const int attach = std::clamp(static_cast<int>(std::lround(cfg.ba_attach_offset + 4.0 * p)),
                                    cfg.ba_attach_min, cfg.ba_attach_max);
      edges = barabasi_albert(n, attach, rng);
      break;
    }
    case FamilyKind::Path:
      edges = path_graph(n);
      break;
  }

  const double removal = rng.uniform(cfg.removal_min, cfg.removal_max);
  EdgeSet kept;
  for (const auto& e : edges)
    if (!rng.bernoulli(removal)) kept.insert(e);

  GraphInstance g;
  g.adjacency = adjacency_from(kept, n);
  g.label = static_cast<int>(kind);
  return g;
}

void assign_features(GraphInstance& g, int scheme) {
  if (scheme != 0)
    throw config_error("assign_features: unknown feature scheme " + std::to_string(scheme));
  const int n = g.n();
  const Matrix& a = g.adjacency;
  Matrix x(n, 3);
  std::vector<std::vector<int>> nbrs(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (a(i, j) != 0.0) nbrs[i].push_back(j);
  for (int i = 0; i < n; ++i) {
    const int deg = static_cast<int>(nbrs[i].size());
    double clustering = 0.0;
    if (deg >= 2) {
      long closed = 0;
      for (size_t u = 0; u < nbrs[i].size(); ++u)
        for (size_t v = u + 1; v < nbrs[i].size(); ++v)
          if (a(nbrs[i][u], nbrs[i][v]) != 0.0) ++closed;
      clustering = 2.0 * closed / (static_cast<double>(deg) * (deg - 1));
    }
    x(i, 0) = static_cast<double>(deg) / n;
    x(i, 1) = clustering;
    x(i, 2) = 1.0;
  }
  g.features = std::move(x);
}

Skeleton load_citation_skeleton(const std::filesystem::path& edges_file,
                                const std::filesystem::path& classes_file) {
  Skeleton sk;
  std::unordered_map<std::string, int> node_index;
  std::unordered_map<std::string, int> class_index;

  std::ifstream cls(classes_file);
  if (!cls) throw io_error("cannot open class file " + classes_file.string());
  std::string line;
  int line_no = 0;
  while (std::getline(cls, line)) {
    ++line_no;
    std::istringstream ss(line);
    std::string id, token;
    if (!(ss >> id)) continue;  // blank line
    if (!(ss >> token))
      throw format_error(classes_file.string() + ":" + std::to_string(line_no) +
                         ": expected '<id> <class>'");
    if (node_index.count(id))
      throw format_error(classes_file.string() + ":" + std::to_string(line_no) +
                         ": duplicate id '" + id + "'");
    node_index.emplace(id, static_cast<int>(node_index.size()));
    auto [it, fresh] = class_index.emplace(token, static_cast<int>(class_index.size()));
    if (fresh) sk.class_names.push_back(token);
    sk.classes.push_back(it->second);
  }
  sk.n = static_cast<int>(sk.classes.size());
  if (sk.n == 0) throw format_error(classes_file.string() + ": no nodes");

  std::ifstream edg(edges_file);
  if (!edg) throw io_error("cannot open edge file " + edges_file.string());
  EdgeSet edges;
  line_no = 0;
  while (std::getline(edg, line)) {
    ++line_no;
    std::istringstream ss(line);
    std::string a, b;
    if (!(ss >> a)) continue;
    if (!(ss >> b))
      throw format_error(edges_file.string() + ":" + std::to_string(line_no) +
                         ": expected an id pair");
    auto ia = node_index.find(a), ib = node_index.find(b);
    if (ia == node_index.end() || ib == node_index.end())
      throw format_error(edges_file.string() + ":" + std::to_string(line_no) +
                         ": node '" + (ia == node_index.end() ? a : b) +
                         "' has no class entry");
    if (ia->second == ib->second) {
      ++sk.self_loops_dropped;
      continue;
    }
    add_edge(edges, ia->second, ib->second);
  }
  sk.edges.assign(edges.begin(), edges.end());
  return sk;
}

Skeleton synth_skeleton(const std::vector<int>& class_sizes, double intra_p,
                        double inter_p, Rng& rng) {
  for (int s : class_sizes)
    if (s <= 0) throw config_error("synth_skeleton: class sizes must be positive");
  Skeleton sk;
  for (size_t c = 0; c < class_sizes.size(); ++c)
    for (int i = 0; i < class_sizes[c]; ++i) sk.classes.push_back(static_cast<int>(c));
  sk.n = static_cast<int>(sk.classes.size());
  EdgeSet edges;
  for (int i = 0; i < sk.n; ++i)
    for (int j = i + 1; j < sk.n; ++j) {
      const double p = sk.classes[i] == sk.classes[j] ? intra_p : inter_p;
      if (rng.bernoulli(p)) edges.insert({i, j});
    }
  sk.edges.assign(edges.begin(), edges.end());
  return sk;
}

const std::vector<int>& default_class_sizes() {
  static const std::vector<int> sizes = {351, 217, 418, 818, 426, 298, 180};
  return sizes;
}

std::pair<double, double> skeleton_probabilities(const std::vector<int>& class_sizes,
                                                 double mean_degree,
                                                 double intra_fraction) {
  long n = 0;
  long intra_pairs = 0;
  for (int s : class_sizes) {
    n += s;
    intra_pairs += static_cast<long>(s) * (s - 1) / 2;
  }
  const long all_pairs = n * (n - 1) / 2;
  const long inter_pairs = all_pairs - intra_pairs;
  const double target_edges = mean_degree * n / 2.0;
  const double p_in = intra_fraction * target_edges / intra_pairs;
  const double p_out = (1.0 - intra_fraction) * target_edges / inter_pairs;
  return {p_in, p_out};
}

std::vector<int> scale_class_sizes(const std::vector<int>& sizes, double factor) {
  if (factor <= 0.0) throw config_error("scale_class_sizes: factor must be positive");
  long total = 0;
  for (int s : sizes) total += s;
  const long target = std::lround(total * factor);
  std::vector<int> out(sizes.size());
  std::vector<std::pair<double, size_t>> remainder;
  long assigned = 0;
  for (size_t i = 0; i < sizes.size(); ++i) {
    const double exact = sizes[i] * factor;
    out[i] = static_cast<int>(exact);
    assigned += out[i];
    remainder.push_back({exact - out[i], i});
  }
  std::sort(remainder.begin(), remainder.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (long k = 0; k < target - assigned; ++k) out[remainder[k % sizes.size()].second] += 1;
  for (int s : out)
    if (s < 1) throw config_error("scale_class_sizes: a class scaled to zero");
  return out;
}

HierarchicalGraph generate_dataset(const Skeleton& skeleton, const GenConfig& cfg) {
  if (skeleton.n == 0) throw usage_error("generate_dataset: empty skeleton");
  for (int c : skeleton.classes)
    if (c < 0 || c >= kFamilyCount)
      throw usage_error("generate_dataset: skeleton class out of range");

  HierarchicalGraph hg;
  hg.instances.resize(skeleton.n);
  hg.num_classes = kFamilyCount;

#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < skeleton.n; ++i) {
    Rng stream = derive_rng(cfg.seed, static_cast<uint64_t>(i));
    GraphInstance g =
        generate_instance(static_cast<FamilyKind>(skeleton.classes[i]), cfg, stream);
    assign_features(g, cfg.feature_scheme);
    g.id = std::to_string(i);
    hg.instances[i] = std::move(g);
  }

  hg.theta = Matrix(skeleton.n, skeleton.n);
  for (const auto& [a, b] : skeleton.edges) {
    hg.theta(a, b) = 1.0;
    hg.theta(b, a) = 1.0;
  }
  hg.labeled_ids.resize(skeleton.n);
  for (int i = 0; i < skeleton.n; ++i) hg.labeled_ids[i] = i;
  return hg;
}

std::vector<FamilyStats> dataset_stats(const HierarchicalGraph& hg) {
  std::vector<FamilyStats> stats(kFamilyCount);
  for (int f = 0; f < kFamilyCount; ++f) stats[f].kind = static_cast<FamilyKind>(f);
  for (const GraphInstance& g : hg.instances) {
    if (!g.label) continue;
    FamilyStats& s = stats[*g.label];
    const int n = g.n();
    long edges = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (g.adjacency(i, j) != 0.0) ++edges;
    s.count += 1;
    s.mean_nodes += n;
    s.mean_edges += static_cast<double>(edges);
    s.mean_density += n > 1 ? 2.0 * edges / (static_cast<double>(n) * (n - 1)) : 0.0;
  }
  for (FamilyStats& s : stats) {
    if (s.count == 0) continue;
    s.mean_nodes /= s.count;
    s.mean_edges /= s.count;
    s.mean_density /= s.count;
  }
  return stats;
}

}  // namespace seal::syngen
