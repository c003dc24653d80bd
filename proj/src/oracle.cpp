#include "strel/oracle.hpp"

#include <algorithm>
#include <bit>

#include "strel/errors.hpp"

namespace strel {
namespace oracle {

double world_probability(const UncertainGraph& g, const PossibleWorld& world) {
  if (world.size() != g.num_edges()) throw bad_argument("world mask size mismatch");
  double p = 1.0;
  for (EdgeId e = 0; e < g.num_edges(); ++e)
    p *= world.test(e) ? g.edge(e).p : 1.0 - g.edge(e).p;
  return p;
}

namespace {

// Reachability on a <=64-node adjacency bitset, one word per node.
bool mask_reachable(const std::vector<std::uint64_t>& adj, NodeId s, NodeId t) {
  std::uint64_t frontier = 1ULL << s;
  std::uint64_t seen = frontier;
  while (frontier) {
    std::uint64_t next = 0;
    std::uint64_t f = frontier;
    while (f) {
      int v = std::countr_zero(f);
      f &= f - 1;
      next |= adj[v];
    }
    next &= ~seen;
    if (next & (1ULL << t)) return true;
    seen |= next;
    frontier = next;
  }
  return (seen >> t) & 1;
}

struct Enumeration {
  std::vector<EdgeId> free_edges;
  double fixed_factor = 1.0;  // product from forced edges in conditional form is 1
  std::vector<std::uint64_t> base_adj;  // adjacency from forced-present edges
};

Enumeration prepare(const UncertainGraph& g, const Condition& cond) {
  if (g.num_nodes() > 64) throw edge_budget_error("exact oracle supports at most 64 nodes");
  std::vector<char> state(g.num_edges(), 0);  // 0 free, 1 present, 2 absent
  for (EdgeId e : cond.forced_present) {
    if (e >= g.num_edges()) throw bad_argument("forced edge out of range");
    state[e] = 1;
  }
  for (EdgeId e : cond.forced_absent) {
    if (e >= g.num_edges()) throw bad_argument("forced edge out of range");
    if (state[e] == 1) throw bad_argument("edge forced both present and absent");
    state[e] = 2;
  }
  Enumeration en;
  en.base_adj.assign(g.num_nodes(), 0);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (state[e] == 0)
      en.free_edges.push_back(e);
    else if (state[e] == 1)
      en.base_adj[g.edge(e).source] |= 1ULL << g.edge(e).target;
  }
  if (en.free_edges.size() > kMaxExactEdges)
    throw edge_budget_error("exact enumeration over " + std::to_string(en.free_edges.size()) +
                            " edges exceeds the cap of " + std::to_string(kMaxExactEdges));
  return en;
}

}  // namespace

double exact_reliability(const UncertainGraph& g, NodeId s, NodeId t) {
  return exact_reliability(g, s, t, Condition{});
}

double exact_reliability(const UncertainGraph& g, NodeId s, NodeId t, const Condition& cond) {
  if (s >= g.num_nodes() || t >= g.num_nodes()) throw bad_argument("node id out of range");
  if (s == t) return 1.0;
  Enumeration en = prepare(g, cond);
  const std::size_t m = en.free_edges.size();
  double total = 0.0;
  std::vector<std::uint64_t> adj(g.num_nodes());
  for (std::uint64_t mask = 0; mask < (1ULL << m); ++mask) {
    adj = en.base_adj;
    double pr = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      const Edge& e = g.edge(en.free_edges[i]);
      if ((mask >> i) & 1) {
        pr *= e.p;
        adj[e.source] |= 1ULL << e.target;
      } else {
        pr *= 1.0 - e.p;
      }
    }
    if (pr != 0.0 && mask_reachable(adj, s, t)) total += pr;
  }
  return total;
}

std::vector<std::vector<double>> exact_reliability_matrix(const UncertainGraph& g) {
  Enumeration en = prepare(g, Condition{});
  const std::size_t m = en.free_edges.size();
  const NodeId n = g.num_nodes();
  std::vector<std::vector<double>> r(n, std::vector<double>(n, 0.0));
  std::vector<std::uint64_t> adj(n), closure(n);
  for (std::uint64_t mask = 0; mask < (1ULL << m); ++mask) {
    adj.assign(n, 0);
    double pr = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      const Edge& e = g.edge(en.free_edges[i]);
      if ((mask >> i) & 1) {
        pr *= e.p;
        adj[e.source] |= 1ULL << e.target;
      } else {
        pr *= 1.0 - e.p;
      }
    }
    if (pr == 0.0) continue;
    for (NodeId s = 0; s < n; ++s) {
      std::uint64_t seen = 1ULL << s;
      std::uint64_t frontier = seen;
      while (frontier) {
        std::uint64_t next = 0;
        std::uint64_t f = frontier;
        while (f) {
          int v = std::countr_zero(f);
          f &= f - 1;
          next |= adj[v];
        }
        next &= ~seen;
        seen |= next;
        frontier = next;
      }
      closure[s] = seen;
    }
    for (NodeId s = 0; s < n; ++s)
      for (NodeId t = 0; t < n; ++t)
        if ((closure[s] >> t) & 1) r[s][t] += pr;
  }
  for (NodeId s = 0; s < n; ++s) r[s][s] = 1.0;
  return r;
}

}  // namespace oracle
}  // namespace strel
