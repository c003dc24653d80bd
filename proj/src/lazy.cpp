#include "strel/lazy.hpp"

#include <cassert>
#include <chrono>
#include <queue>

#include "strel/errors.hpp"

namespace strel {

namespace {

struct Due {
  std::uint64_t round;
  std::uint32_t order;  // adjacency position, so same-round ties pop deterministically
  EdgeId edge;
};

struct DueLater {
  bool operator()(const Due& a, const Due& b) const {
    if (a.round != b.round) return a.round > b.round;
    return a.order > b.order;
  }
};

using DueHeap = std::priority_queue<Due, std::vector<Due>, DueLater>;

struct NodeState {
  bool initialized = false;
  std::uint64_t counter = 0;  // rounds this node has been processed
  DueHeap heap;               // (due round, out-edge)
};

Estimate lp_estimate_impl(const UncertainGraph& g, NodeId s, NodeId t, std::uint64_t k,
                          RandomStream& rng, bool corrected, LpCounters* counters) {
  if (k < 1) throw bad_argument("lazy propagation requires K >= 1");
  if (s >= g.num_nodes() || t >= g.num_nodes()) throw bad_argument("node id out of range");

  auto start = std::chrono::steady_clock::now();
  const std::uint64_t run_seed = rng.next_u64();
  RandomStream draws(run_seed);

  if (counters) {
    counters->node_rounds.assign(g.num_nodes(), 0);
    counters->edge_fires.assign(g.num_edges(), 0);
  }

  // Node state persists across all K rounds of one estimate; that is what
  // lets a single geometric draw stand in for a run of per-round coin flips.
  std::vector<NodeState> state(g.num_nodes());
  std::vector<std::uint64_t> visited_gen(g.num_nodes(), 0);
  std::vector<NodeId> frontier;
  std::vector<Due> reinserts;

  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < k; ++i) {
    if (s == t) {
      ++hits;
      continue;
    }
    const std::uint64_t gen = i + 1;
    frontier.clear();
    frontier.push_back(s);
    visited_gen[s] = gen;
    bool hit = false;

    for (std::size_t head = 0; head < frontier.size() && !hit; ++head) {
      NodeId v = frontier[head];
      NodeState& ns = state[v];
      if (!ns.initialized) {
        ns.initialized = true;
        ns.counter = 0;
        std::uint32_t order = 0;
        for (EdgeId e : g.out_edges(v)) {
          std::uint64_t x = geometric_draw(g.edge(e).p, draws);
          ns.heap.push(Due{x + ns.counter, order++, e});
        }
      }
      if (counters) ++counters->node_rounds[v];

      // Pop everything due this round. Reinsertions are buffered until the
      // loop ends so that a due value equal to the current counter cannot
      // fire twice in one round.
      reinserts.clear();
      while (!ns.heap.empty() && ns.heap.top().round <= ns.counter) {
        Due due = ns.heap.top();
        ns.heap.pop();
        const Edge& edge = g.edge(due.edge);
        if (counters) ++counters->edge_fires[due.edge];
        NodeId nbr = edge.target;
        if (visited_gen[nbr] != gen) {
          visited_gen[nbr] = gen;
          frontier.push_back(nbr);
        }
        std::uint64_t x = geometric_draw(edge.p, draws);
        // The corrected reinsertion dates the new failure run from the next
        // round; the legacy one dates it from the round that just fired.
        due.round = x + ns.counter + (corrected ? 1 : 0);
        reinserts.push_back(due);
        if (nbr == t) {
          hit = true;
          break;
        }
      }
      for (const Due& d : reinserts) ns.heap.push(d);
      if (hit) break;  // early stop: this node's counter does not advance
      ns.counter += 1;
#ifndef NDEBUG
      if (corrected)
        assert(ns.heap.empty() || ns.heap.top().round >= ns.counter);
#endif
    }
    if (hit) ++hits;
  }

  Estimate est;
  est.value = static_cast<double>(hits) / static_cast<double>(k);
  est.samples_used = k;
  est.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  est.seed = run_seed;
  return est;
}

}  // namespace

Estimate lp_plus_estimate(const UncertainGraph& g, NodeId s, NodeId t, std::uint64_t k,
                          RandomStream& rng) {
  return lp_estimate_impl(g, s, t, k, rng, true, nullptr);
}

Estimate lp_plus_estimate(const UncertainGraph& g, NodeId s, NodeId t, std::uint64_t k,
                          RandomStream& rng, LpCounters* counters) {
  return lp_estimate_impl(g, s, t, k, rng, true, counters);
}

Estimate lp_legacy_estimate(const UncertainGraph& g, NodeId s, NodeId t, std::uint64_t k,
                            RandomStream& rng) {
  return lp_estimate_impl(g, s, t, k, rng, false, nullptr);
}

}  // namespace strel
