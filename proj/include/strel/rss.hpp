#pragma once

#include <cstdint>
#include <vector>

#include "strel/estimate.hpp"
#include "strel/graph.hpp"
#include "strel/rhh.hpp"

namespace strel {

// Partition of the probability space over r selected edges into r+1 strata:
// stratum 0 forces all of them absent; stratum i (1-based) forces edge i
// present and every earlier edge absent, leaving later edges undetermined.
struct StratumPlan {
  std::vector<EdgeId> edges;  // T, in BFS selection order
  std::vector<double> pi;     // stratum probabilities, size r+1, sums to 1

  // Status of selected edge j in stratum i: 0 absent, 1 present, -1 undetermined.
  int status(std::size_t stratum, std::size_t j) const {
    if (stratum == 0) return 0;
    if (j + 1 < stratum) return 0;
    if (j + 1 == stratum) return 1;
    return -1;
  }
};

struct RssParams {
  std::uint64_t stratum_r = 50;
  std::uint64_t threshold = 5;
};

// Selects the first r undetermined edges met by BFS from s (adjacency order
// within a node, edges to already-visited nodes included) and computes the
// stratum probabilities. Throws insufficient_edges_error when fewer than r
// edges are reachable; the caller then falls back to plain MC.
StratumPlan build_strata(const UncertainGraph& g, NodeId s, std::uint64_t r);

// simplify_graph output: the reduced graph plus the node id mapping.
struct SimplifyResult {
  static constexpr NodeId npos = static_cast<NodeId>(-1);
  UncertainGraph graph;
  std::vector<NodeId> new_id;  // original id -> new id, npos if pruned
};

// Applies stratum i's statuses (absent edges removed, present edges forced to
// probability 1) and prunes everything not reachable from s when all remaining
// edges are treated as present.
SimplifyResult simplify_graph(const UncertainGraph& g, const StratumPlan& plan,
                              std::size_t stratum, NodeId s);

// Recursive stratified sampling; falls back to MC when K drops below the
// threshold or fewer than r edges are reachable from s. Sample counts per
// stratum come from largest-remainder rounding of pi_i * K, so they always sum
// to K. Strata with pi = 0 are skipped; a stratum whose outcome is already
// forced (full path or cut) contributes analytically without recursion.
Estimate rss_estimate(const UncertainGraph& g, NodeId s, NodeId t, std::uint64_t k,
                      const RssParams& params, RandomStream& rng,
                      RecursionObserver* observer = nullptr);

// Largest-remainder apportionment of k by the weights; sums exactly to k.
std::vector<std::uint64_t> allocate_samples(const std::vector<double>& weights, std::uint64_t k);

}  // namespace strel
