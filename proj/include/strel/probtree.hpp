#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "strel/estimate.hpp"
#include "strel/graph.hpp"

namespace strel {

// Directed edge whose probability combines a direct (base) edge with path
// contributions aggregated from child bags:
//   p = 1 - (1 - base_p) * prod over contributions (1 - c.p)
// Contributions stay sorted by bag id so the product is evaluated in a
// canonical order and deleting then re-adding an entry reproduces the exact
// same probability. Removing the contribution of one bag is therefore a plain
// recomputation over the remaining factors, which stays defined even when a
// factor equals 1.
struct AggregatedEdge {
  struct Contribution {
    std::uint32_t bag;
    double p;
  };

  NodeId source = 0;
  NodeId target = 0;
  double base_p = 0.0;
  std::vector<Contribution> contributions;

  double probability() const;
  void add_contribution(std::uint32_t bag, double p);
  // Drops every contribution coming from `bag`; returns true if the edge still
  // carries any probability.
  bool remove_contributions_of(std::uint32_t bag);
};

inline constexpr std::uint32_t kRootBag = static_cast<std::uint32_t>(-1);

struct Bag {
  std::uint32_t id = 0;
  NodeId covered = 0;                // the node removed when this bag was created
  std::uint32_t parent = kRootBag;   // bag id, or kRootBag when the root is the parent
  std::uint32_t level = 0;           // depth below the root
  std::vector<NodeId> nodes;         // covered node first
  std::vector<AggregatedEdge> edges;
};

// Fixed-width tree decomposition with pre-aggregated pair reliabilities.
// Peeling works on the undirected skeleton in phases d = 1..w: while some node
// has degree exactly d, the lowest-id such node is bagged together with its
// neighbors and the unconsumed edges between them, removed, and (for d = 2)
// replaced by directed shortcut edges between its two neighbors carrying
//   1 - (1 - direct) * (1 - p(u->v) * p(v->x))
// per direction, computed over the bag's aggregated edges. Whatever survives
// the peeling becomes the root graph. Lossless for width <= 2.
struct ProbTreeIndex {
  int width = 2;
  bool lossy = false;
  NodeId num_nodes = 0;
  std::vector<std::uint64_t> labels;     // dense id -> original label
  std::vector<Bag> bags;                 // in creation order, bag id == position
  std::vector<std::uint32_t> covered_by; // node -> bag id, kRootBag if in the root
  std::vector<NodeId> root_nodes;
  std::vector<AggregatedEdge> root_edges;
};

// Throws lossy_width_error when w > 2 and allow_lossy is false.
ProbTreeIndex build_fwd_index(const UncertainGraph& g, int width, bool allow_lossy = false);

void save_probtree(const ProbTreeIndex& index, const std::string& path);
ProbTreeIndex load_probtree(const std::string& path);

// Extraction result: a self-contained graph equivalent to the original for the
// (s, t) query, with the query endpoints mapped into it.
struct ExtractedQuery {
  UncertainGraph graph;
  NodeId s = 0;
  NodeId t = 0;
};

// Lifts the bags covering s and t, and every ancestor bag on their way up,
// into the root: each lifted bag's shortcut contribution is deleted from its
// parent via the provenance records and its own nodes and edges are merged in.
// Bags off those two chains never enter the result, so the query graph is
// never larger than the original.
ExtractedQuery extract_query_graph(const ProbTreeIndex& index, NodeId s, NodeId t);

// Runs `inner` on the extracted query graph.
Estimate probtree_estimate(const ProbTreeIndex& index, NodeId s, NodeId t, std::uint64_t k,
                           const EstimatorFn& inner, RandomStream& rng);

}  // namespace strel
