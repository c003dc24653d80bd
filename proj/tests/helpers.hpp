#pragma once

#include <cstdint>
#include <set>
#include <tuple>
#include <vector>

#include "strel/graph.hpp"
#include "strel/random.hpp"

namespace strel::test {

inline UncertainGraph make_graph(NodeId n,
                                 const std::vector<std::tuple<NodeId, NodeId, double>>& edges) {
  std::vector<Edge> es;
  for (const auto& [u, v, p] : edges) es.push_back(Edge{u, v, p});
  return UncertainGraph::from_edges(n, std::move(es));
}

// 0 -> 1 -> 2.
inline UncertainGraph chain3(double p) {
  return make_graph(3, {{0, 1, p}, {1, 2, p}});
}

// 0 -> {1,2} -> 3, all probabilities 0.5. Exact reliability 0->3 is 0.4375.
inline UncertainGraph diamond() {
  return make_graph(4, {{0, 1, 0.5}, {0, 2, 0.5}, {1, 3, 0.5}, {2, 3, 0.5}});
}

// Random simple directed graph: m distinct non-loop edges, probabilities
// uniform in [lo, hi].
inline UncertainGraph random_graph(std::uint64_t seed, NodeId n, EdgeId m, double lo, double hi) {
  RandomStream rng(seed);
  std::set<std::pair<NodeId, NodeId>> used;
  std::vector<Edge> edges;
  while (edges.size() < m) {
    NodeId u = static_cast<NodeId>(rng.uniform_int(n));
    NodeId v = static_cast<NodeId>(rng.uniform_int(n));
    if (u == v || !used.insert({u, v}).second) continue;
    edges.push_back(Edge{u, v, lo + (hi - lo) * rng.next_double()});
  }
  return UncertainGraph::from_edges(n, std::move(edges));
}

// Independent ground truth: enumerate all 2^m worlds with a plain adjacency
// scan, no bitset tricks shared with the production oracle.
inline bool world_has_path(const UncertainGraph& g, std::uint64_t mask, NodeId s, NodeId t) {
  if (s == t) return true;
  std::vector<char> seen(g.num_nodes(), 0);
  std::vector<NodeId> stack{s};
  seen[s] = 1;
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      if (!((mask >> e) & 1) || g.edge(e).source != v) continue;
      NodeId w = g.edge(e).target;
      if (w == t) return true;
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  return false;
}

inline double brute_force_reliability(const UncertainGraph& g, NodeId s, NodeId t) {
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < (1ULL << g.num_edges()); ++mask) {
    double pr = 1.0;
    for (EdgeId e = 0; e < g.num_edges(); ++e)
      pr *= ((mask >> e) & 1) ? g.edge(e).p : 1.0 - g.edge(e).p;
    if (world_has_path(g, mask, s, t)) total += pr;
  }
  return total;
}

}  // namespace strel::test
