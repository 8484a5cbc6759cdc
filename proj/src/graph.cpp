#include "seal/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace seal {

NormalizedAdjacency normalize_adjacency(const Matrix& a) {
  if (a.rows != a.cols)
    throw dim_error("normalize_adjacency: matrix is " + a.shape_str() + ", not square");
  const int n = a.rows;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      if (a(i, j) != a(j, i))
        throw dim_error("normalize_adjacency: asymmetric at (" + std::to_string(i) +
                        "," + std::to_string(j) + ")");
  std::vector<double> dinv(n);
  for (int i = 0; i < n; ++i) {
    double deg = 1.0;  // self-loop from A+I
    const double* row = a.row_ptr(i);
    for (int j = 0; j < n; ++j) deg += row[j];
    dinv[i] = 1.0 / std::sqrt(deg);
  }
  Matrix out(n, n);
  for (int i = 0; i < n; ++i) {
    const double* row = a.row_ptr(i);
    double* orow = out.row_ptr(i);
    for (int j = 0; j < n; ++j) {
      const double aij = row[j] + (i == j ? 1.0 : 0.0);
      if (aij != 0.0) orow[j] = dinv[i] * aij * dinv[j];
    }
  }
  return NormalizedAdjacency{std::move(out)};
}

NormalizedAdjacency normalize_theta(const HierarchicalGraph& hg) {
  return normalize_adjacency(hg.theta);
}

namespace {

bool is_zero_one(double x) { return x == 0.0 || x == 1.0; }

}  // namespace

ValidationReport validate(const HierarchicalGraph& hg) {
  ValidationReport r;
  auto bad = [&](std::string msg) {
    r.ok = false;
    r.violation = std::move(msg);
    return r;
  };

  const int count = hg.count();
  if (count == 0) return bad("hierarchical graph has no instances");
  if (hg.theta.rows != count || hg.theta.cols != count)
    return bad("theta is " + hg.theta.shape_str() + " but there are " +
               std::to_string(count) + " instances");
  if (hg.num_classes < 1) return bad("class count must be at least 1");

  const int phi = hg.instances.front().phi();
  for (int idx = 0; idx < count; ++idx) {
    const GraphInstance& g = hg.instances[idx];
    const int n = g.n();
    if (n < 1) return bad("instance " + std::to_string(idx) + " has no nodes");
    if (g.adjacency.cols != n)
      return bad("instance " + std::to_string(idx) + " adjacency is " +
                 g.adjacency.shape_str());
    if (g.features.rows != n)
      return bad("instance " + std::to_string(idx) + " has " + std::to_string(n) +
                 " nodes but " + std::to_string(g.features.rows) + " feature rows");
    if (g.features.cols != phi)
      return bad("instance " + std::to_string(idx) + " has feature width " +
                 std::to_string(g.features.cols) + ", expected " + std::to_string(phi));
    for (int i = 0; i < n; ++i) {
      if (g.adjacency(i, i) != 0.0)
        return bad("instance " + std::to_string(idx) + " has a self-loop at node " +
                   std::to_string(i));
      for (int j = i + 1; j < n; ++j) {
        const double x = g.adjacency(i, j);
        if (!is_zero_one(x))
          return bad("instance " + std::to_string(idx) + " adjacency entry (" +
                     std::to_string(i) + "," + std::to_string(j) + ") is not 0/1");
        if (x != g.adjacency(j, i))
          return bad("instance " + std::to_string(idx) + " adjacency asymmetric at (" +
                     std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
    if (g.label && (*g.label < 0 || *g.label >= hg.num_classes))
      return bad("instance " + std::to_string(idx) + " label " +
                 std::to_string(*g.label) + " out of range");
  }

  for (int i = 0; i < count; ++i) {
    if (hg.theta(i, i) != 0.0)
      return bad("theta has a self-loop at instance " + std::to_string(i));
    for (int j = i + 1; j < count; ++j) {
      if (!is_zero_one(hg.theta(i, j)))
        return bad("theta entry (" + std::to_string(i) + "," + std::to_string(j) +
                   ") is not 0/1");
      if (hg.theta(i, j) != hg.theta(j, i))
        return bad("theta asymmetric at (" + std::to_string(i) + "," +
                   std::to_string(j) + ")");
    }
  }

  std::vector<char> seen(count, 0);
  for (int id : hg.labeled_ids) {
    if (id < 0 || id >= count)
      return bad("labeled id " + std::to_string(id) + " out of range");
    if (seen[id]) return bad("id " + std::to_string(id) + " appears twice in the partition");
    seen[id] = 1;
    if (!hg.instances[id].label)
      return bad("instance " + std::to_string(id) + " is marked labeled but has no label");
  }
  for (int id : hg.unlabeled_ids) {
    if (id < 0 || id >= count)
      return bad("unlabeled id " + std::to_string(id) + " out of range");
    if (seen[id]) return bad("id " + std::to_string(id) + " appears twice in the partition");
    seen[id] = 1;
  }
  if (!std::all_of(seen.begin(), seen.end(), [](char c) { return c == 1; }))
    return bad("labeled/unlabeled partition does not cover all instances");

  return r;
}

Split split(const HierarchicalGraph& hg, int labeled_count, int test_count, Rng& rng) {
  const int count = hg.count();
  if (labeled_count < 0 || test_count < 0 || labeled_count + test_count > count)
    throw config_error("split: requested " + std::to_string(labeled_count) + "+" +
                       std::to_string(test_count) + " ids from a population of " +
                       std::to_string(count));
  std::vector<int> ids(count);
  std::iota(ids.begin(), ids.end(), 0);
  rng.shuffle(ids);
  Split s;
  s.train_ids.assign(ids.begin(), ids.begin() + labeled_count);
  s.test_ids.assign(ids.begin() + labeled_count, ids.begin() + labeled_count + test_count);
  for (int id : s.train_ids)
    if (!hg.instances[id].label)
      throw config_error("split: train instance " + std::to_string(id) +
                         " has no ground-truth label");
  return s;
}

}  // namespace seal
