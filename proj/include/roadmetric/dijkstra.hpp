#pragma once

#include <limits>
#include <queue>
#include <utility>
#include <vector>

#include "roadmetric/eps_graph.hpp"

namespace roadmetric {

struct SearchTree {
  std::vector<double> dist;
  std::vector<int> pred_edge;  // -1 at the root and at unreached nodes

  bool reached(int n) const { return dist[n] < std::numeric_limits<double>::infinity(); }
};

struct SearchMasks {
  const std::vector<char>* banned_nodes = nullptr;
  const std::vector<char>* banned_edges = nullptr;
};

/// Binary-heap Dijkstra. Nodes are settled in (distance, id) order and a
/// node's predecessor is the lowest-id neighbour among equal-cost arrivals,
/// so trees are reproducible. Stops early once `stop_at` is settled.
inline SearchTree dijkstra(const Graph& g, int root, int stop_at = -1, SearchMasks masks = {}) {
  const std::size_t n = g.nodes.size();
  SearchTree t;
  t.dist.assign(n, std::numeric_limits<double>::infinity());
  t.pred_edge.assign(n, -1);
  std::vector<char> settled(n, 0);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  auto banned_node = [&](int v) { return masks.banned_nodes && (*masks.banned_nodes)[v]; };
  if (banned_node(root)) return t;
  t.dist[root] = 0.0;
  heap.push({0.0, root});
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (settled[u] || d > t.dist[u]) continue;
    settled[u] = 1;
    if (u == stop_at) break;
    for (int ei : g.adjacency[u]) {
      if (masks.banned_edges && (*masks.banned_edges)[ei]) continue;
      const Edge& e = g.edges[ei];
      const int v = e.other(u);
      if (settled[v] || banned_node(v)) continue;
      const double nd = d + e.weight;
      if (nd < t.dist[v]) {
        t.dist[v] = nd;
        t.pred_edge[v] = ei;
        heap.push({nd, v});
      } else if (nd == t.dist[v] && t.pred_edge[v] >= 0 && u < g.edges[t.pred_edge[v]].other(v)) {
        t.pred_edge[v] = ei;
      }
    }
  }
  return t;
}

/// Edge indices from the tree root to `to`, in travel order. Empty when `to`
/// is the root or unreachable.
inline std::vector<int> tree_path_edges(const Graph& g, const SearchTree& t, int to) {
  std::vector<int> out;
  int cur = to;
  while (t.pred_edge[cur] >= 0) {
    out.push_back(t.pred_edge[cur]);
    cur = g.edges[t.pred_edge[cur]].other(cur);
  }
  return {out.rbegin(), out.rend()};
}

}  // namespace roadmetric
