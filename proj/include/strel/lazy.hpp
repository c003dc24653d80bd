#pragma once

#include <cstdint>

#include "strel/estimate.hpp"
#include "strel/graph.hpp"

namespace strel {

// Sampling with per-neighbor geometric skip counts. Each visited node keeps a
// counter of rounds it has been processed and a min-heap of (due round,
// out-edge); an edge is probed only in rounds where it is due, so an edge with
// probability p is touched about p times as often as per-round coin flips.
//
// lp_plus_estimate reinserts a fired edge with due round X + c_v + 1: the X
// failure rounds start at the node's next round. lp_legacy_estimate reinserts
// with X + c_v, which dates the failure count from the round that just fired,
// so the edge comes due one round early (X = 0 makes it due again immediately
// and it fires in the node's very next round). The legacy variant therefore
// overestimates reliability; it is kept to measure that bias and is excluded
// from the benchmark set.
Estimate lp_plus_estimate(const UncertainGraph& g, NodeId s, NodeId t, std::uint64_t k,
                          RandomStream& rng);
Estimate lp_legacy_estimate(const UncertainGraph& g, NodeId s, NodeId t, std::uint64_t k,
                            RandomStream& rng);

// Optional instrumentation: rounds in which each node was processed and fire
// counts per edge.
struct LpCounters {
  std::vector<std::uint64_t> node_rounds;
  std::vector<std::uint64_t> edge_fires;
};

Estimate lp_plus_estimate(const UncertainGraph& g, NodeId s, NodeId t, std::uint64_t k,
                          RandomStream& rng, LpCounters* counters);

}  // namespace strel
