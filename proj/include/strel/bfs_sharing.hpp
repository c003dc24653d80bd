#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "strel/estimate.hpp"
#include "strel/graph.hpp"

namespace strel {

// Offline index: one L-bit vector per edge, bit i = "edge present in world i".
// Vectors are packed into 64-bit words so queries can AND/OR/popcount a word
// at a time.
class EdgeBitIndex {
 public:
  EdgeBitIndex() = default;
  EdgeBitIndex(std::uint64_t width, EdgeId num_edges)
      : l_(width), m_(num_edges), words_per_edge_((width + 63) / 64),
        bits_(static_cast<std::size_t>(num_edges) * words_per_edge_, 0) {}

  std::uint64_t width() const { return l_; }
  EdgeId num_edges() const { return m_; }
  std::uint64_t words_per_edge() const { return words_per_edge_; }

  const std::uint64_t* words(EdgeId e) const { return bits_.data() + e * words_per_edge_; }
  std::uint64_t* words(EdgeId e) { return bits_.data() + e * words_per_edge_; }

  std::uint64_t popcount(EdgeId e) const;

 private:
  std::uint64_t l_ = 0;
  EdgeId m_ = 0;
  std::uint64_t words_per_edge_ = 0;
  std::vector<std::uint64_t> bits_;
};

// Samples every bit independently with its edge's probability. O(L*m).
EdgeBitIndex build_index(const UncertainGraph& g, std::uint64_t width, RandomStream& rng);

// Redraws all bits at the same width; used between queries to keep them
// independent.
EdgeBitIndex refresh_index(const EdgeBitIndex& index, const UncertainGraph& g, RandomStream& rng);

void save_index(const EdgeBitIndex& index, const std::string& path);
EdgeBitIndex load_index(const std::string& path);

// Per-query node state: one K-bit vector per visited node tracking the worlds
// in which the node is reached from s, plus the visited set. Allocated per
// query and discarded.
struct NodeStateVectors {
  NodeStateVectors(NodeId num_nodes, std::uint64_t k);

  bool visited(NodeId v) const { return visited_[v] != 0; }
  void mark_visited(NodeId v) { visited_[v] = 1; }
  std::vector<std::uint64_t>& vec(NodeId v) { return vecs_[v]; }
  const std::vector<std::uint64_t>& vec(NodeId v) const { return vecs_[v]; }

  std::uint64_t k() const { return k_; }
  std::uint64_t words() const { return words_; }
  // Mask for the last partial word so no bit above k leaks in.
  std::uint64_t tail_mask() const { return tail_mask_; }

 private:
  std::uint64_t k_, words_, tail_mask_;
  std::vector<char> visited_;
  std::vector<std::vector<std::uint64_t>> vecs_;
};

// Propagates I_v's worlds into already-visited out-neighbor u and onward to a
// fixpoint: whenever a visited node's vector gains a world, its visited
// out-neighbors are reconsidered. Vectors only ever gain bits, so the total
// popcount strictly grows on every applied change and the loop terminates.
void cascade_update(NodeId v, NodeId u, NodeStateVectors& state, const EdgeBitIndex& index,
                    const UncertainGraph& g);

// Shared BFS over the first k worlds of the index; value = popcount(I_t)/k.
// No early termination: cascading updates must run to completion. Throws
// index_too_narrow_error if k exceeds the index width.
Estimate query(const EdgeBitIndex& index, const UncertainGraph& g, NodeId s, NodeId t,
               std::uint64_t k);

}  // namespace strel
