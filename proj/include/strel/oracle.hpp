#pragma once

#include <vector>

#include "strel/graph.hpp"

namespace strel {
namespace oracle {

// Exhaustive enumeration is refused above this many edges.
inline constexpr EdgeId kMaxExactEdges = 25;

// Probability of one concrete world: product of p(e) over present edges
// times (1-p(e)) over absent edges.
double world_probability(const UncertainGraph& g, const PossibleWorld& world);

// Edges pinned present or absent while enumerating the rest.
struct Condition {
  std::vector<EdgeId> forced_present;
  std::vector<EdgeId> forced_absent;
};

// Exact s-t reliability by summing over all worlds of the free edges.
// Throws edge_budget_error when the graph has more than kMaxExactEdges edges.
double exact_reliability(const UncertainGraph& g, NodeId s, NodeId t);
double exact_reliability(const UncertainGraph& g, NodeId s, NodeId t, const Condition& cond);

// Exact reliability for every ordered pair at once; result[s][t].
// Same edge budget as exact_reliability.
std::vector<std::vector<double>> exact_reliability_matrix(const UncertainGraph& g);

}  // namespace oracle
}  // namespace strel
