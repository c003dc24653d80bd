#include "strel/rhh.hpp"

#include <chrono>
#include <cmath>

#include "strel/errors.hpp"

namespace strel {

namespace {

enum EdgeState : char { kUndetermined = 0, kPresent = 1, kAbsent = 2 };

std::vector<char> states_from_group(const UncertainGraph& g, const PrefixGroup& group) {
  std::vector<char> state(g.num_edges(), kUndetermined);
  for (EdgeId e : group.forced_present) {
    if (e >= g.num_edges()) throw bad_argument("edge id out of range");
    state[e] = kPresent;
  }
  for (EdgeId e : group.forced_absent) {
    if (e >= g.num_edges()) throw bad_argument("edge id out of range");
    if (state[e] == kPresent) throw bad_argument("edge in both E1 and E2");
    state[e] = kAbsent;
  }
  return state;
}

// BFS reachability where an edge participates iff pred(state) holds.
template <typename Pred>
bool state_reachable(const UncertainGraph& g, const std::vector<char>& state, NodeId s, NodeId t,
                     Pred pred) {
  if (s == t) return true;
  std::vector<char> visited(g.num_nodes(), 0);
  std::vector<NodeId> queue{s};
  visited[s] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (EdgeId e : g.out_edges(queue[head])) {
      if (!pred(state[e])) continue;
      NodeId w = g.edge(e).target;
      if (visited[w]) continue;
      if (w == t) return true;
      visited[w] = 1;
      queue.push_back(w);
    }
  }
  return false;
}

Termination detect(const UncertainGraph& g, const std::vector<char>& state, NodeId s, NodeId t) {
  if (state_reachable(g, state, s, t, [](char st) { return st == kPresent; }))
    return Termination::path_found;
  if (!state_reachable(g, state, s, t, [](char st) { return st != kAbsent; }))
    return Termination::cut_found;
  return Termination::undecided;
}

constexpr EdgeId kNoEdge = static_cast<EdgeId>(-1);

EdgeId select_dfs(const UncertainGraph& g, const std::vector<char>& state, NodeId u,
                  std::vector<char>& visited) {
  visited[u] = 1;
  for (EdgeId e : g.out_edges(u)) {
    if (state[e] == kAbsent) continue;
    if (state[e] == kPresent) {
      NodeId w = g.edge(e).target;
      if (!visited[w]) {
        EdgeId found = select_dfs(g, state, w, visited);
        if (found != kNoEdge) return found;
      }
    } else {
      return e;
    }
  }
  return kNoEdge;
}

// Plain MC rounds on the conditioned graph: forced-present edges always exist,
// forced-absent edges never do, everything else is sampled on demand.
double conditioned_mc(const UncertainGraph& g, const std::vector<char>& state, NodeId s, NodeId t,
                      std::uint64_t k, RandomStream rng) {
  std::vector<std::uint64_t> visited_gen(g.num_nodes(), 0);
  std::vector<std::uint64_t> edge_gen(g.num_edges(), 0);
  std::vector<char> edge_present(g.num_edges(), 0);
  std::vector<NodeId> queue;
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < k; ++i) {
    if (s == t) {
      ++hits;
      continue;
    }
    RandomStream round = rng.split(i);
    const std::uint64_t gen = i + 1;
    queue.clear();
    queue.push_back(s);
    visited_gen[s] = gen;
    bool hit = false;
    for (std::size_t head = 0; head < queue.size() && !hit; ++head) {
      NodeId v = queue[head];
      for (EdgeId e : g.out_edges(v)) {
        if (state[e] == kAbsent) continue;
        if (state[e] == kUndetermined) {
          if (edge_gen[e] != gen) {
            edge_gen[e] = gen;
            edge_present[e] = round.bernoulli(g.edge(e).p) ? 1 : 0;
          }
          if (!edge_present[e]) continue;
        }
        NodeId w = g.edge(e).target;
        if (visited_gen[w] == gen) continue;
        visited_gen[w] = gen;
        queue.push_back(w);
        if (w == t) {
          hit = true;
          break;
        }
      }
    }
    if (hit) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(k);
}

struct RhhContext {
  const UncertainGraph& g;
  NodeId s, t;
  std::uint64_t threshold;
  RandomStream master;
  std::uint64_t leaf_counter = 0;
  RecursionObserver* observer;
};

double recurse(RhhContext& ctx, std::vector<char>& state, std::uint64_t k, std::size_t depth) {
  // Analytic outcomes are free and exact, so they are checked before the
  // sampling fallback.
  switch (detect(ctx.g, state, ctx.s, ctx.t)) {
    case Termination::path_found:
      return 1.0;
    case Termination::cut_found:
      return 0.0;
    case Termination::undecided:
      break;
  }
  if (k <= ctx.threshold) {
    // A zero-sample branch still contributes its term; give it one sample.
    std::uint64_t k_leaf = k < 1 ? 1 : k;
    return conditioned_mc(ctx.g, state, ctx.s, ctx.t, k_leaf,
                          ctx.master.split(ctx.leaf_counter++));
  }

  std::vector<char> visited(ctx.g.num_nodes(), 0);
  EdgeId e = select_dfs(ctx.g, state, ctx.s, visited);
  if (e == kNoEdge) throw error("no expandable edge although the group is undecided");

  const double p = ctx.g.edge(e).p;
  const std::uint64_t k1 = static_cast<std::uint64_t>(std::floor(static_cast<double>(k) * p));
  const std::uint64_t k2 = k - k1;
  if (ctx.observer)
    ctx.observer->on_split(depth, ctx.g.edge(e).source, ctx.g.edge(e).target, k1, k2);

  state[e] = kPresent;
  double present_part = recurse(ctx, state, k1, depth + 1);
  double absent_part = 0.0;
  if (p < 1.0) {  // weight (1-p) = 0: the branch's value cannot matter
    state[e] = kAbsent;
    absent_part = recurse(ctx, state, k2, depth + 1);
  }
  state[e] = kUndetermined;
  return p * present_part + (1.0 - p) * absent_part;
}

}  // namespace

double group_probability(const UncertainGraph& g, const PrefixGroup& group) {
  (void)states_from_group(g, group);  // validates the group
  double prob = 1.0;
  for (EdgeId e : group.forced_present) prob *= g.edge(e).p;
  for (EdgeId e : group.forced_absent) prob *= 1.0 - g.edge(e).p;
  return prob;
}

Termination detect_termination(const UncertainGraph& g, const PrefixGroup& group, NodeId s,
                               NodeId t) {
  if (s >= g.num_nodes() || t >= g.num_nodes()) throw bad_argument("node id out of range");
  std::vector<char> state = states_from_group(g, group);
  return detect(g, state, s, t);
}

EdgeId select_expandable_edge(const UncertainGraph& g, const PrefixGroup& group, NodeId s) {
  if (s >= g.num_nodes()) throw bad_argument("node id out of range");
  std::vector<char> state = states_from_group(g, group);
  std::vector<char> visited(g.num_nodes(), 0);
  EdgeId e = select_dfs(g, state, s, visited);
  if (e == kNoEdge) throw error("no expandable edge");
  return e;
}

Estimate rhh_estimate(const UncertainGraph& g, NodeId s, NodeId t, std::uint64_t k,
                      const RhhParams& params, RandomStream& rng, RecursionObserver* observer) {
  if (k < 1) throw bad_argument("rhh_estimate requires K >= 1");
  if (params.threshold < 1) throw bad_argument("threshold must be >= 1");
  if (s >= g.num_nodes() || t >= g.num_nodes()) throw bad_argument("node id out of range");

  auto start = std::chrono::steady_clock::now();
  const std::uint64_t run_seed = rng.next_u64();
  RhhContext ctx{g, s, t, params.threshold, RandomStream(run_seed), 0, observer};
  std::vector<char> state(g.num_edges(), kUndetermined);
  double value = recurse(ctx, state, k, 0);

  Estimate est;
  est.value = value;
  est.samples_used = k;
  est.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  est.seed = run_seed;
  return est;
}

}  // namespace strel
