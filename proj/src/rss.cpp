#include "strel/rss.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <numeric>

#include "strel/errors.hpp"
#include "strel/mc.hpp"

namespace strel {

StratumPlan build_strata(const UncertainGraph& g, NodeId s, std::uint64_t r) {
  if (r < 1) throw bad_argument("stratum count r must be >= 1");
  if (s >= g.num_nodes()) throw bad_argument("node id out of range");

  StratumPlan plan;
  std::vector<char> visited(g.num_nodes(), 0);
  std::vector<NodeId> queue{s};
  visited[s] = 1;
  for (std::size_t head = 0; head < queue.size() && plan.edges.size() < r; ++head) {
    NodeId v = queue[head];
    for (EdgeId e : g.out_edges(v)) {
      // Forced edges (probability 1) expand reachability but cannot be
      // stratified on; everything else qualifies, including edges whose
      // target is already visited.
      if (g.edge(e).p < 1.0) {
        plan.edges.push_back(e);
        if (plan.edges.size() == r) break;
      }
      NodeId w = g.edge(e).target;
      if (!visited[w]) {
        visited[w] = 1;
        queue.push_back(w);
      }
    }
  }
  if (plan.edges.size() < r)
    throw insufficient_edges_error("only " + std::to_string(plan.edges.size()) +
                                   " stratifiable edges reachable, need " + std::to_string(r));

  plan.pi.resize(r + 1);
  double all_absent = 1.0;
  for (std::uint64_t i = 1; i <= r; ++i) {
    double p = g.edge(plan.edges[i - 1]).p;
    plan.pi[i] = all_absent * p;  // edges before i absent, edge i present
    all_absent *= 1.0 - p;
  }
  plan.pi[0] = all_absent;
  return plan;
}

SimplifyResult simplify_graph(const UncertainGraph& g, const StratumPlan& plan,
                              std::size_t stratum, NodeId s) {
  if (stratum > plan.edges.size()) throw bad_argument("stratum index out of range");

  std::vector<char> removed(g.num_edges(), 0), forced(g.num_edges(), 0);
  for (std::size_t j = 0; j < plan.edges.size(); ++j) {
    int st = plan.status(stratum, j);
    if (st == 0)
      removed[plan.edges[j]] = 1;
    else if (st == 1)
      forced[plan.edges[j]] = 1;
  }

  // Keep only what s can reach when every surviving edge is treated as present.
  std::vector<char> keep(g.num_nodes(), 0);
  std::vector<NodeId> queue{s};
  keep[s] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (EdgeId e : g.out_edges(queue[head])) {
      if (removed[e]) continue;
      NodeId w = g.edge(e).target;
      if (!keep[w]) {
        keep[w] = 1;
        queue.push_back(w);
      }
    }
  }

  SimplifyResult result;
  result.new_id.assign(g.num_nodes(), SimplifyResult::npos);
  std::vector<std::uint64_t> labels;
  NodeId next = 0;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (!keep[v]) continue;
    result.new_id[v] = next++;
    labels.push_back(g.label_of(v));
  }
  std::vector<Edge> edges;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (removed[e]) continue;
    const Edge& edge = g.edge(e);
    if (!keep[edge.source] || !keep[edge.target]) continue;
    edges.push_back(Edge{result.new_id[edge.source], result.new_id[edge.target],
                         forced[e] ? 1.0 : edge.p});
  }
  result.graph = UncertainGraph::from_edges(next, std::move(edges), std::move(labels));
  return result;
}

std::vector<std::uint64_t> allocate_samples(const std::vector<double>& weights, std::uint64_t k) {
  std::vector<std::uint64_t> alloc(weights.size(), 0);
  std::vector<double> frac(weights.size(), 0.0);
  std::uint64_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    double share = weights[i] * static_cast<double>(k);
    alloc[i] = static_cast<std::uint64_t>(std::floor(share));
    frac[i] = share - std::floor(share);
    assigned += alloc[i];
  }
  assert(assigned <= k);
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
  for (std::size_t i = 0; assigned < k; ++i) {
    ++alloc[order[i % order.size()]];
    ++assigned;
  }
  return alloc;
}

namespace {

bool forced_path_exists(const UncertainGraph& g, NodeId s, NodeId t) {
  if (s == t) return true;
  std::vector<char> visited(g.num_nodes(), 0);
  std::vector<NodeId> queue{s};
  visited[s] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (EdgeId e : g.out_edges(queue[head])) {
      if (g.edge(e).p < 1.0) continue;
      NodeId w = g.edge(e).target;
      if (visited[w]) continue;
      if (w == t) return true;
      visited[w] = 1;
      queue.push_back(w);
    }
  }
  return false;
}

bool any_path_exists(const UncertainGraph& g, NodeId s, NodeId t) {
  if (s == t) return true;
  std::vector<char> visited(g.num_nodes(), 0);
  std::vector<NodeId> queue{s};
  visited[s] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (EdgeId e : g.out_edges(queue[head])) {
      NodeId w = g.edge(e).target;
      if (visited[w]) continue;
      if (w == t) return true;
      visited[w] = 1;
      queue.push_back(w);
    }
  }
  return false;
}

struct RssContext {
  std::uint64_t r;
  std::uint64_t threshold;
  RandomStream master;
  std::uint64_t leaf_counter = 0;
  RecursionObserver* observer;
};

double rss_recurse(RssContext& ctx, const UncertainGraph& g, NodeId s, NodeId t, std::uint64_t k,
                   std::size_t depth) {
  // Analytic short-circuits: a stratum may already force an s-t path (all
  // probability-1 edges) or an s-t cut.
  if (forced_path_exists(g, s, t)) return 1.0;
  if (!any_path_exists(g, s, t)) return 0.0;

  auto plain_mc = [&](std::uint64_t samples) {
    RandomStream leaf = ctx.master.split(ctx.leaf_counter++);
    return mc_estimate(g, s, t, samples < 1 ? 1 : samples, leaf).value;
  };

  if (k < ctx.threshold) return plain_mc(k);

  StratumPlan plan;
  try {
    plan = build_strata(g, s, ctx.r);
  } catch (const insufficient_edges_error&) {
    return plain_mc(k);
  }

  std::vector<std::uint64_t> alloc = allocate_samples(plan.pi, k);

  if (ctx.observer && ctx.r == 1) {
    const Edge& e = g.edge(plan.edges[0]);
    ctx.observer->on_split(depth, static_cast<NodeId>(g.label_of(e.source)),
                           static_cast<NodeId>(g.label_of(e.target)), alloc[1], alloc[0]);
  }

  double total = 0.0;
  for (std::size_t i = 0; i < plan.pi.size(); ++i) {
    if (plan.pi[i] == 0.0) continue;
    SimplifyResult simp = simplify_graph(g, plan, i, s);
    NodeId t_new = simp.new_id[t];
    if (t_new == SimplifyResult::npos) continue;  // t pruned: this stratum is a cut
    total += plan.pi[i] *
             rss_recurse(ctx, simp.graph, simp.new_id[s], t_new, alloc[i], depth + 1);
  }
  return total;
}

}  // namespace

Estimate rss_estimate(const UncertainGraph& g, NodeId s, NodeId t, std::uint64_t k,
                      const RssParams& params, RandomStream& rng, RecursionObserver* observer) {
  if (k < 1) throw bad_argument("rss_estimate requires K >= 1");
  if (params.stratum_r < 1 || params.threshold < 1)
    throw bad_argument("r and threshold must be >= 1");
  if (s >= g.num_nodes() || t >= g.num_nodes()) throw bad_argument("node id out of range");

  auto start = std::chrono::steady_clock::now();
  const std::uint64_t run_seed = rng.next_u64();
  RssContext ctx{params.stratum_r, params.threshold, RandomStream(run_seed), 0, observer};
  double value = rss_recurse(ctx, g, s, t, k, 0);

  Estimate est;
  est.value = value;
  est.samples_used = k;
  est.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  est.seed = run_seed;
  return est;
}

}  // namespace strel
