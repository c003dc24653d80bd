#include "strel/mc.hpp"

#include <chrono>
#include <cmath>

#include "strel/errors.hpp"

namespace strel {

Estimate mc_estimate(const UncertainGraph& g, NodeId s, NodeId t, std::uint64_t k,
                     RandomStream& rng, const McOptions& opts) {
  if (k < 1) throw bad_argument("mc_estimate requires K >= 1");
  if (s >= g.num_nodes() || t >= g.num_nodes()) throw bad_argument("node id out of range");

  auto start = std::chrono::steady_clock::now();
  const std::uint64_t run_seed = rng.next_u64();
  RandomStream master(run_seed);

  // Generation-stamped state: no per-round clearing, rounds cost O(touched).
  std::vector<std::uint64_t> visited_gen(g.num_nodes(), 0);
  std::vector<std::uint64_t> edge_gen(g.num_edges(), 0);
  std::vector<char> edge_present(g.num_edges(), 0);
  std::vector<NodeId> queue;
  queue.reserve(g.num_nodes());

  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < k; ++i) {
    // One stream per round, independent of draw counts in other rounds, so
    // disabling early stop cannot perturb later rounds.
    RandomStream round = master.split(i);
    const std::uint64_t gen = i + 1;

    if (s == t) {
      ++hits;
      continue;
    }

    queue.clear();
    queue.push_back(s);
    visited_gen[s] = gen;
    bool hit = false;
    for (std::size_t head = 0; head < queue.size() && !(hit && opts.early_stop); ++head) {
      NodeId v = queue[head];
      for (EdgeId e : g.out_edges(v)) {
        if (edge_gen[e] != gen) {  // sample each edge at most once per round
          edge_gen[e] = gen;
          edge_present[e] = round.bernoulli(g.edge(e).p) ? 1 : 0;
        }
        if (!edge_present[e]) continue;
        NodeId w = g.edge(e).target;
        if (visited_gen[w] == gen) continue;
        visited_gen[w] = gen;
        queue.push_back(w);
        if (w == t) {
          hit = true;
          if (opts.early_stop) break;
        }
      }
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

double mc_variance(double r_hat, std::uint64_t k) {
  if (r_hat < 0.0 || r_hat > 1.0) throw bad_argument("r_hat must be in [0,1]");
  if (k < 1) throw bad_argument("K must be >= 1");
  return r_hat * (1.0 - r_hat) / static_cast<double>(k);
}

std::uint64_t chernoff_sample_bound(double epsilon, double lambda, double r) {
  if (!(epsilon > 0.0)) throw bad_argument("epsilon must be > 0");
  if (!(lambda > 0.0) || !(lambda < 1.0)) throw bad_argument("lambda must be in (0,1)");
  if (!(r > 0.0) || r > 1.0) throw bad_argument("r must be in (0,1]");
  double bound = 3.0 / (epsilon * epsilon * r) * std::log(2.0 / lambda);
  return static_cast<std::uint64_t>(std::ceil(bound));
}

}  // namespace strel
