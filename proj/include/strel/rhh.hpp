#pragma once

#include <cstdint>
#include <vector>

#include "strel/estimate.hpp"
#include "strel/graph.hpp"

namespace strel {

// A set of worlds agreeing on forced-present edges E1 and forced-absent edges
// E2. The two sets must be disjoint.
struct PrefixGroup {
  std::vector<EdgeId> forced_present;  // E1
  std::vector<EdgeId> forced_absent;   // E2
};

struct RhhParams {
  std::uint64_t threshold = 5;  // switch to non-recursive sampling at K <= threshold
};

enum class Termination { path_found, cut_found, undecided };

// Generating probability of the group: prod p(e) over E1 * prod (1-p(e)) over E2.
double group_probability(const UncertainGraph& g, const PrefixGroup& group);

// path_found iff E1 alone connects s to t (group reliability 1); cut_found iff
// even E \ E2 cannot connect them (reliability 0).
Termination detect_termination(const UncertainGraph& g, const PrefixGroup& group, NodeId s,
                               NodeId t);

// Next edge to condition on: depth-first from s descending only forced-present
// edges, scanning each adjacency list in edge-index order; the first
// undetermined edge encountered wins. Deterministic given the group.
// Throws error if no edge qualifies (the caller missed a cut).
EdgeId select_expandable_edge(const UncertainGraph& g, const PrefixGroup& group, NodeId s);

// Observer for recursion-structure tests.
struct RecursionObserver {
  virtual ~RecursionObserver() = default;
  // Called at each binary split: recursion depth, the conditioned edge by its
  // endpoints in the original graph, and the samples allocated to the present
  // / absent branch.
  virtual void on_split(std::size_t depth, NodeId source, NodeId target,
                        std::uint64_t k_present, std::uint64_t k_absent) = 0;
};

// Divide and conquer on one edge at a time: value =
// p(e) * estimate(e present) + (1-p(e)) * estimate(e absent), with samples
// split proportionally (K1 = floor(K*p(e))). Branches whose outcome is already
// decided return 0/1 analytically; at K <= threshold the remaining group is
// sampled by plain MC on the conditioned graph (E1 at probability 1, E2
// removed). A branch allocated zero samples is still evaluated, with one
// forced sample, so its term never drops out.
Estimate rhh_estimate(const UncertainGraph& g, NodeId s, NodeId t, std::uint64_t k,
                      const RhhParams& params, RandomStream& rng,
                      RecursionObserver* observer = nullptr);

}  // namespace strel
