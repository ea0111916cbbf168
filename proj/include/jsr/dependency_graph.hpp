#pragma once

// Zero/nonzero structure of a matrix set: the dependency graph on indices,
// its strongly connected components and condensation DAG, all-pairs
// distances, and shortest-path witness products.

#include <Eigen/Core>
#include <algorithm>
#include <deque>
#include <utility>
#include <vector>

#include "jsr/error.hpp"
#include "jsr/matrix_set.hpp"

namespace jsr {

struct DependencyGraph {
  Index dim = 0;
  // adjacency(i, j) == true iff some matrix in the set has a positive (i, j)
  // entry; self-loops allowed.
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> adjacency;
};

template <class S>
DependencyGraph graph_of(const DenseMatrix<S>& m) {
  DependencyGraph g;
  g.dim = m.rows();
  g.adjacency.setConstant(g.dim, g.dim, false);
  for (Index j = 0; j < g.dim; ++j)
    for (Index i = 0; i < g.dim; ++i)
      if (m(i, j) > S(0)) g.adjacency(i, j) = true;
  return g;
}

template <class S>
DependencyGraph build_graph(const MatrixSet<S>& set) {
  DependencyGraph g;
  g.dim = set.dim;
  g.adjacency.setConstant(g.dim, g.dim, false);
  for (const auto& m : set.matrices)
    for (Index j = 0; j < g.dim; ++j)
      for (Index i = 0; i < g.dim; ++i)
        if (m(i, j) > S(0)) g.adjacency(i, j) = true;
  return g;
}

struct Condensation {
  // Components in topological order of the condensation, ties broken by the
  // smallest contained vertex; vertices inside a component sorted ascending.
  std::vector<std::vector<int>> components;
  std::vector<int> component_of;
  std::vector<std::pair<int, int>> dag_edges;  // between distinct components
  std::vector<bool> trivial;                   // singleton without a self-loop

  int size() const { return static_cast<int>(components.size()); }
  bool strongly_connected() const { return components.size() == 1 && !trivial[0]; }
};

namespace detail {

// Tarjan, iterative to keep the stack shallow regardless of input.
inline std::vector<int> tarjan_components(const DependencyGraph& g, int& count) {
  const int n = static_cast<int>(g.dim);
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  int next_index = 0;
  count = 0;

  struct Frame { int v; int next_child; };
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    std::vector<Frame> call;
    call.push_back({root, 0});
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      bool descended = false;
      while (f.next_child < n) {
        int w = f.next_child++;
        if (!g.adjacency(f.v, w)) continue;
        if (index[w] == -1) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
          descended = true;
          break;
        }
        if (on_stack[w]) low[f.v] = std::min(low[f.v], index[w]);
      }
      if (descended) continue;
      if (low[f.v] == index[f.v]) {
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = count;
        } while (w != f.v);
        ++count;
      }
      int v = f.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
    }
  }
  return comp;
}

}  // namespace detail

inline Condensation scc(const DependencyGraph& g) {
  const int n = static_cast<int>(g.dim);
  int count = 0;
  std::vector<int> raw = detail::tarjan_components(g, count);

  // Condensation edges on the raw labels.
  std::vector<std::vector<bool>> edge(count, std::vector<bool>(count, false));
  std::vector<int> indegree(count, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!g.adjacency(i, j) || raw[i] == raw[j]) continue;
      if (!edge[raw[i]][raw[j]]) {
        edge[raw[i]][raw[j]] = true;
        ++indegree[raw[j]];
      }
    }
  }
  std::vector<int> min_vertex(count, n);
  for (int v = 0; v < n; ++v) min_vertex[raw[v]] = std::min(min_vertex[raw[v]], v);

  // Kahn with a smallest-vertex tie-break gives the published order.
  std::vector<int> order;  // order[new] = raw label
  std::vector<bool> emitted(count, false);
  for (int step = 0; step < count; ++step) {
    int best = -1;
    for (int c = 0; c < count; ++c) {
      if (emitted[c] || indegree[c] != 0) continue;
      if (best == -1 || min_vertex[c] < min_vertex[best]) best = c;
    }
    if (best == -1) throw Error("condensation is cyclic; SCC computation is broken");
    emitted[best] = true;
    order.push_back(best);
    for (int c = 0; c < count; ++c)
      if (edge[best][c]) --indegree[c];
  }
  std::vector<int> renumber(count, -1);
  for (int pos = 0; pos < count; ++pos) renumber[order[pos]] = pos;

  Condensation cond;
  cond.components.assign(count, {});
  cond.component_of.assign(n, -1);
  for (int v = 0; v < n; ++v) {
    cond.component_of[v] = renumber[raw[v]];
    cond.components[renumber[raw[v]]].push_back(v);
  }
  for (auto& c : cond.components) std::sort(c.begin(), c.end());
  for (int a = 0; a < count; ++a)
    for (int b = 0; b < count; ++b)
      if (edge[a][b]) cond.dag_edges.emplace_back(renumber[a], renumber[b]);
  std::sort(cond.dag_edges.begin(), cond.dag_edges.end());
  cond.trivial.assign(count, false);
  for (int c = 0; c < count; ++c) {
    const auto& verts = cond.components[c];
    cond.trivial[c] = verts.size() == 1 && !g.adjacency(verts[0], verts[0]);
  }
  return cond;
}

struct DistanceTable {
  static constexpr int kUnreachable = -1;
  // delta(i, j) = length of a shortest path, 0 on the diagonal by convention,
  // kUnreachable when no path exists.
  Eigen::MatrixXi delta;

  bool reachable(int i, int j) const { return delta(i, j) != kUnreachable; }
};

inline DistanceTable distances(const DependencyGraph& g) {
  const int n = static_cast<int>(g.dim);
  DistanceTable t;
  t.delta.setConstant(n, n, DistanceTable::kUnreachable);
  for (int s = 0; s < n; ++s) {
    t.delta(s, s) = 0;
    std::deque<int> queue{s};
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int v = 0; v < n; ++v) {
        if (!g.adjacency(u, v)) continue;
        if (t.delta(s, v) != DistanceTable::kUnreachable) continue;
        if (v == s) continue;  // diagonal stays 0 by convention
        t.delta(s, v) = t.delta(s, u) + 1;
        queue.push_back(v);
      }
    }
  }
  return t;
}

// One shortest-path witness for reachability of j from i: the
// lexicographically smallest shortest path, each edge realized by the first
// matrix (in set order) with a positive entry there. Its product has a
// positive (i, j) entry of value at least V^delta(i,j).
template <class S>
struct WitnessProduct {
  int source = 0;
  int target = 0;
  std::vector<int> matrix_indices;  // one per path edge, indices into the set
  S value{};
};

template <class S>
WitnessProduct<S> witness_product(const MatrixSet<S>& set, int i, int j) {
  const DependencyGraph g = build_graph(set);
  const int n = static_cast<int>(g.dim);
  if (i < 0 || j < 0 || i >= n || j >= n) throw Error("witness_product: vertex out of range");
  WitnessProduct<S> w;
  w.source = i;
  w.target = j;
  if (i == j) {
    w.value = S(1);  // empty product
    return w;
  }
  const DistanceTable dist = distances(g);
  if (!dist.reachable(i, j)) {
    throw Error("witness_product: " + std::to_string(j) + " is unreachable from " +
                std::to_string(i));
  }

  DenseMatrix<S> acc;
  int cur = i;
  int remaining = dist.delta(i, j);
  while (cur != j) {
    int next = -1;
    for (int v = 0; v < n; ++v) {
      if (!g.adjacency(cur, v)) continue;
      int tail = (v == j) ? 0 : dist.delta(v, j);
      if (v != j && tail == DistanceTable::kUnreachable) continue;
      if (tail == remaining - 1) { next = v; break; }
    }
    if (next == -1) throw Error("witness_product: shortest-path reconstruction failed");
    int chosen = -1;
    for (Index k = 0; k < set.size(); ++k) {
      if (set.matrices[k](cur, next) > S(0)) { chosen = static_cast<int>(k); break; }
    }
    w.matrix_indices.push_back(chosen);
    acc = w.matrix_indices.size() == 1 ? set.matrices[chosen]
                                       : multiply(acc, set.matrices[chosen]);
    cur = next;
    --remaining;
  }
  w.value = acc(i, j);
  if (!(w.value > S(0))) throw Error("witness_product: witness entry is not positive");
  return w;
}

}  // namespace jsr
