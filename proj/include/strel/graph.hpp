#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "strel/random.hpp"

namespace strel {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

struct Edge {
  NodeId source;
  NodeId target;
  double p;  // existence probability in (0,1], or a raw weight before a model is applied
};

// Directed graph with an independent existence probability per edge.
// Nodes are densely numbered 0..n-1; the original file labels are kept in a
// side table. Immutable after construction and safe to share across threads.
class UncertainGraph {
 public:
  UncertainGraph() = default;

  // `labels` maps dense id -> original label; empty means identity labels.
  static UncertainGraph from_edges(NodeId num_nodes, std::vector<Edge> edges,
                                   std::vector<std::uint64_t> labels = {});

  NodeId num_nodes() const { return n_; }
  EdgeId num_edges() const { return static_cast<EdgeId>(edges_.size()); }

  const Edge& edge(EdgeId e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }

  // Outgoing / incoming edge ids of a node, in edge-index order.
  std::span<const EdgeId> out_edges(NodeId v) const {
    return {out_flat_.data() + out_start_[v], out_start_[v + 1] - out_start_[v]};
  }
  std::span<const EdgeId> in_edges(NodeId v) const {
    return {in_flat_.data() + in_start_[v], in_start_[v + 1] - in_start_[v]};
  }

  std::uint64_t label_of(NodeId v) const { return labels_[v]; }
  std::optional<NodeId> id_of_label(std::uint64_t label) const;

  // Copy with one edge probability replaced (test and oracle helper).
  UncertainGraph with_edge_probability(EdgeId e, double p) const;

 private:
  NodeId n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::uint32_t> out_start_, in_start_;
  std::vector<EdgeId> out_flat_, in_flat_;
  std::vector<std::uint64_t> labels_;
  std::unordered_map<std::uint64_t, NodeId> label_to_id_;
};

enum class ParseMode {
  probabilities,  // third column must be in (0,1]
  raw_weights,    // third column is any finite positive weight
};

// Text format: one edge per line, "source target value", '#' starts a comment,
// blank lines ignored. Node ids are arbitrary unsigned labels and are densely
// renumbered in first-appearance order. Self-loops and duplicate (source,target)
// pairs are rejected.
UncertainGraph parse_edge_list(std::string_view text, ParseMode mode = ParseMode::probabilities);

// Inverse of parse_edge_list, using original labels and 17 significant digits
// so that probabilities round-trip bit-exact.
std::string serialize_edge_list(const UncertainGraph& g);

UncertainGraph load_graph(const std::string& path, ParseMode mode = ParseMode::probabilities);
void save_graph(const UncertainGraph& g, const std::string& path);

// Edge probability models applied after ingestion.
struct ProbabilityModel {
  enum class Kind { inverse_out_degree, uniform_choice, exponential_cdf, fixed };

  Kind kind = Kind::fixed;
  std::vector<double> choices;  // uniform_choice
  double mu = 0.0;              // exponential_cdf, > 0
  double value = 1.0;           // fixed, in (0,1]

  static ProbabilityModel inverse_out_degree();
  static ProbabilityModel uniform_choice(std::vector<double> values);
  static ProbabilityModel exponential_cdf(double mu);
  static ProbabilityModel fixed(double p);

  // CLI spellings: "inv-outdeg", "uniform:0.1,0.01,0.001", "exp:5", "fixed:0.3".
  static ProbabilityModel parse(std::string_view spec);
};

// Replaces every edge probability according to the model. For exponential_cdf
// the current edge value is interpreted as a raw weight c and mapped to
// 1 - exp(-c/mu).
UncertainGraph assign_probabilities(const UncertainGraph& g, const ProbabilityModel& model,
                                    RandomStream& rng);

// One sampled deterministic world: a presence bit per edge, packed in words.
class PossibleWorld {
 public:
  PossibleWorld() = default;
  explicit PossibleWorld(std::size_t num_edges)
      : m_(num_edges), words_((num_edges + 63) / 64, 0) {}

  std::size_t size() const { return m_; }
  bool test(std::size_t e) const { return (words_[e >> 6] >> (e & 63)) & 1; }
  void set(std::size_t e, bool present) {
    std::uint64_t bit = 1ULL << (e & 63);
    if (present)
      words_[e >> 6] |= bit;
    else
      words_[e >> 6] &= ~bit;
  }

 private:
  std::size_t m_ = 0;
  std::vector<std::uint64_t> words_;
};

// Each edge present independently with its probability.
PossibleWorld sample_world(const UncertainGraph& g, RandomStream& rng);

// BFS over present edges; reachable(g, w, s, s) is always true.
bool reachable(const UncertainGraph& g, const PossibleWorld& world, NodeId s, NodeId t);

}  // namespace strel
