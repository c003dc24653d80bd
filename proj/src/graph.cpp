#include "strel/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "strel/errors.hpp"

namespace strel {

UncertainGraph UncertainGraph::from_edges(NodeId num_nodes, std::vector<Edge> edges,
                                          std::vector<std::uint64_t> labels) {
  UncertainGraph g;
  g.n_ = num_nodes;
  g.edges_ = std::move(edges);

  if (labels.empty()) {
    labels.resize(num_nodes);
    for (NodeId v = 0; v < num_nodes; ++v) labels[v] = v;
  }
  if (labels.size() != num_nodes) throw bad_argument("label table size mismatch");
  g.labels_ = std::move(labels);
  g.label_to_id_.reserve(g.labels_.size());
  for (NodeId v = 0; v < num_nodes; ++v) g.label_to_id_.emplace(g.labels_[v], v);

  std::vector<std::uint32_t> out_count(num_nodes + 1, 0), in_count(num_nodes + 1, 0);
  for (const Edge& e : g.edges_) {
    if (e.source >= num_nodes || e.target >= num_nodes)
      throw bad_argument("edge endpoint out of range");
    ++out_count[e.source + 1];
    ++in_count[e.target + 1];
  }
  for (NodeId v = 0; v < num_nodes; ++v) {
    out_count[v + 1] += out_count[v];
    in_count[v + 1] += in_count[v];
  }
  g.out_start_ = out_count;
  g.in_start_ = in_count;
  g.out_flat_.resize(g.edges_.size());
  g.in_flat_.resize(g.edges_.size());
  std::vector<std::uint32_t> out_fill = g.out_start_, in_fill = g.in_start_;
  // Filling in edge-index order keeps every adjacency list sorted by edge id.
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    g.out_flat_[out_fill[g.edges_[e].source]++] = e;
    g.in_flat_[in_fill[g.edges_[e].target]++] = e;
  }
  return g;
}

std::optional<NodeId> UncertainGraph::id_of_label(std::uint64_t label) const {
  auto it = label_to_id_.find(label);
  if (it == label_to_id_.end()) return std::nullopt;
  return it->second;
}

UncertainGraph UncertainGraph::with_edge_probability(EdgeId e, double p) const {
  if (e >= num_edges()) throw bad_argument("edge id out of range");
  if (!(p > 0.0) || p > 1.0) throw data_error("probability out of range (0,1]");
  std::vector<Edge> edges = edges_;
  edges[e].p = p;
  return from_edges(n_, std::move(edges), labels_);
}

namespace {

bool parse_u64(std::string_view tok, std::uint64_t& out) {
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

bool parse_f64(std::string_view tok, double& out) {
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

}  // namespace

UncertainGraph parse_edge_list(std::string_view text, ParseMode mode) {
  std::vector<Edge> edges;
  std::vector<std::uint64_t> labels;
  std::unordered_map<std::uint64_t, NodeId> ids;
  std::unordered_set<std::uint64_t> seen_pairs;

  auto intern = [&](std::uint64_t label) -> NodeId {
    auto it = ids.find(label);
    if (it != ids.end()) return it->second;
    NodeId id = static_cast<NodeId>(labels.size());
    ids.emplace(label, id);
    labels.push_back(label);
    return id;
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? eol : eol - pos);
    pos = eol == std::string_view::npos ? text.size() : eol + 1;
    ++line_no;

    if (std::size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);

    std::string_view toks[3];
    int n_tok = 0;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i >= line.size()) break;
      std::size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
      if (n_tok == 3) throw parse_error(line_no, "expected 'source target value'");
      toks[n_tok++] = line.substr(i, j - i);
      i = j;
    }
    if (n_tok == 0) continue;  // blank or comment-only line
    if (n_tok != 3) throw parse_error(line_no, "expected 'source target value'");

    std::uint64_t u_label, v_label;
    double value;
    if (!parse_u64(toks[0], u_label) || !parse_u64(toks[1], v_label))
      throw parse_error(line_no, "node ids must be non-negative integers");
    if (!parse_f64(toks[2], value) || !std::isfinite(value))
      throw parse_error(line_no, "bad numeric value");

    if (u_label == v_label) throw parse_error(line_no, "self-loops are not allowed");
    if (mode == ParseMode::probabilities) {
      if (!(value > 0.0) || value > 1.0)
        throw parse_error(line_no, "probability out of range (0,1]");
    } else {
      if (!(value > 0.0)) throw parse_error(line_no, "weight must be positive");
    }

    NodeId u = intern(u_label), v = intern(v_label);
    std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | v;
    if (!seen_pairs.insert(key).second)
      throw parse_error(line_no, "duplicate edge");
    edges.push_back(Edge{u, v, value});
  }

  return UncertainGraph::from_edges(static_cast<NodeId>(labels.size()), std::move(edges),
                                    std::move(labels));
}

std::string serialize_edge_list(const UncertainGraph& g) {
  std::string out;
  char buf[96];
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Edge& edge = g.edge(e);
    int len = std::snprintf(buf, sizeof(buf), "%" PRIu64 " %" PRIu64 " %.17g\n",
                            g.label_of(edge.source), g.label_of(edge.target), edge.p);
    out.append(buf, static_cast<std::size_t>(len));
  }
  return out;
}

UncertainGraph load_graph(const std::string& path, ParseMode mode) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_edge_list(ss.str(), mode);
}

void save_graph(const UncertainGraph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open " + path + " for writing");
  out << serialize_edge_list(g);
  if (!out) throw io_error("write failed: " + path);
}

ProbabilityModel ProbabilityModel::inverse_out_degree() {
  ProbabilityModel m;
  m.kind = Kind::inverse_out_degree;
  return m;
}

ProbabilityModel ProbabilityModel::uniform_choice(std::vector<double> values) {
  if (values.empty()) throw bad_argument("uniform_choice needs at least one value");
  for (double v : values)
    if (!(v > 0.0) || v > 1.0) throw bad_argument("uniform_choice values must be in (0,1]");
  ProbabilityModel m;
  m.kind = Kind::uniform_choice;
  m.choices = std::move(values);
  return m;
}

ProbabilityModel ProbabilityModel::exponential_cdf(double mu) {
  if (!(mu > 0.0)) throw bad_argument("exponential_cdf requires mu > 0");
  ProbabilityModel m;
  m.kind = Kind::exponential_cdf;
  m.mu = mu;
  return m;
}

ProbabilityModel ProbabilityModel::fixed(double p) {
  if (!(p > 0.0) || p > 1.0) throw bad_argument("fixed probability must be in (0,1]");
  ProbabilityModel m;
  m.kind = Kind::fixed;
  m.value = p;
  return m;
}

ProbabilityModel ProbabilityModel::parse(std::string_view spec) {
  auto colon = spec.find(':');
  std::string_view head = spec.substr(0, colon);
  std::string_view args = colon == std::string_view::npos ? "" : spec.substr(colon + 1);
  if (head == "inv-outdeg") return inverse_out_degree();
  if (head == "uniform") {
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos <= args.size()) {
      std::size_t comma = args.find(',', pos);
      std::string_view tok = args.substr(pos, comma == std::string_view::npos ? comma : comma - pos);
      double v;
      if (!parse_f64(tok, v)) throw bad_argument("bad uniform value list");
      values.push_back(v);
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    return uniform_choice(std::move(values));
  }
  if (head == "exp") {
    double mu;
    if (!parse_f64(args, mu)) throw bad_argument("bad exp model: expected exp:<mu>");
    return exponential_cdf(mu);
  }
  if (head == "fixed") {
    double p;
    if (!parse_f64(args, p)) throw bad_argument("bad fixed model: expected fixed:<p>");
    return fixed(p);
  }
  throw bad_argument("unknown probability model: " + std::string(spec));
}

UncertainGraph assign_probabilities(const UncertainGraph& g, const ProbabilityModel& model,
                                    RandomStream& rng) {
  std::vector<Edge> edges = g.edges();
  switch (model.kind) {
    case ProbabilityModel::Kind::inverse_out_degree:
      for (Edge& e : edges)
        e.p = 1.0 / static_cast<double>(g.out_edges(e.source).size());
      break;
    case ProbabilityModel::Kind::uniform_choice:
      for (Edge& e : edges)
        e.p = model.choices[rng.uniform_int(model.choices.size())];
      break;
    case ProbabilityModel::Kind::exponential_cdf:
      for (Edge& e : edges) {
        if (!(e.p > 0.0)) throw data_error("exponential_cdf requires positive edge weights");
        e.p = -std::expm1(-e.p / model.mu);  // 1 - exp(-c/mu)
      }
      break;
    case ProbabilityModel::Kind::fixed:
      for (Edge& e : edges) e.p = model.value;
      break;
  }
  std::vector<std::uint64_t> labels(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) labels[v] = g.label_of(v);
  return UncertainGraph::from_edges(g.num_nodes(), std::move(edges), std::move(labels));
}

PossibleWorld sample_world(const UncertainGraph& g, RandomStream& rng) {
  PossibleWorld w(g.num_edges());
  for (EdgeId e = 0; e < g.num_edges(); ++e) w.set(e, rng.bernoulli(g.edge(e).p));
  return w;
}

bool reachable(const UncertainGraph& g, const PossibleWorld& world, NodeId s, NodeId t) {
  if (s >= g.num_nodes() || t >= g.num_nodes()) throw bad_argument("node id out of range");
  if (s == t) return true;
  std::vector<char> visited(g.num_nodes(), 0);
  std::vector<NodeId> queue;
  queue.push_back(s);
  visited[s] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    NodeId v = queue[head];
    for (EdgeId e : g.out_edges(v)) {
      if (!world.test(e)) continue;
      NodeId w = g.edge(e).target;
      if (visited[w]) continue;
      if (w == t) return true;
      visited[w] = 1;
      queue.push_back(w);
    }
  }
  return false;
}

}  // namespace strel
