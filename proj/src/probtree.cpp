#include "strel/probtree.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <map>
#include <set>

#include "strel/errors.hpp"

namespace strel {

double AggregatedEdge::probability() const {
  // Canonical order: base factor first, then contributions ascending by bag
  // id. Keeping the order fixed makes delete-then-readd reproduce the exact
  // same floating-point value.
  double miss = 1.0 - base_p;
  for (const Contribution& c : contributions) miss *= 1.0 - c.p;
  return 1.0 - miss;
}

void AggregatedEdge::add_contribution(std::uint32_t bag, double p) {
  auto it = std::lower_bound(
      contributions.begin(), contributions.end(), bag,
      [](const Contribution& c, std::uint32_t b) { return c.bag < b; });
  contributions.insert(it, Contribution{bag, p});
}

bool AggregatedEdge::remove_contributions_of(std::uint32_t bag) {
  contributions.erase(std::remove_if(contributions.begin(), contributions.end(),
                                     [&](const Contribution& c) { return c.bag == bag; }),
                      contributions.end());
  return base_p > 0.0 || !contributions.empty();
}

namespace {

// One live edge object of the evolving skeleton: an unordered node pair with a
// directed payload each way. Original edges carry a base probability; shortcut
// objects emitted when a node is peeled carry a contribution tagged with the
// emitting bag.
struct SkelPayload {
  double base = 0.0;
  double contrib = 0.0;
  std::uint32_t origin = kRootBag;  // bag that emitted the contribution

  bool empty() const { return base == 0.0 && contrib == 0.0; }
};

struct SkelObject {
  NodeId a, b;  // a < b
  SkelPayload ab, ba;
  bool consumed = false;
};

struct EdgeKey {
  NodeId s, t;
  bool operator<(const EdgeKey& o) const { return s != o.s ? s < o.s : t < o.t; }
};

void merge_payload(std::map<EdgeKey, AggregatedEdge>& edges, NodeId s, NodeId t,
                   const SkelPayload& payload) {
  if (payload.empty()) return;
  AggregatedEdge& e = edges[EdgeKey{s, t}];
  e.source = s;
  e.target = t;
  if (payload.base > 0.0) e.base_p = payload.base;  // each original edge is consumed once
  if (payload.contrib > 0.0) e.add_contribution(payload.origin, payload.contrib);
}

double pair_probability(const std::map<EdgeKey, AggregatedEdge>& edges, NodeId s, NodeId t) {
  auto it = edges.find(EdgeKey{s, t});
  return it == edges.end() ? 0.0 : it->second.probability();
}

}  // namespace

ProbTreeIndex build_fwd_index(const UncertainGraph& g, int width, bool allow_lossy) {
  if (width < 1) throw bad_argument("tree width must be >= 1");
  if (width > 2 && !allow_lossy)
    throw lossy_width_error("width " + std::to_string(width) +
                            " loses pairwise correlations; pass the lossy flag to accept that");

  ProbTreeIndex index;
  index.width = width;
  index.lossy = width > 2;
  index.num_nodes = g.num_nodes();
  index.labels.resize(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) index.labels[v] = g.label_of(v);
  index.covered_by.assign(g.num_nodes(), kRootBag);

  // Skeleton state.
  std::vector<SkelObject> objects;
  objects.reserve(g.num_edges());
  std::vector<std::map<NodeId, std::vector<std::size_t>>> adj(g.num_nodes());

  auto add_object = [&](SkelObject obj) {
    std::size_t idx = objects.size();
    objects.push_back(std::move(obj));
    adj[objects[idx].a][objects[idx].b].push_back(idx);
    adj[objects[idx].b][objects[idx].a].push_back(idx);
  };

  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Edge& edge = g.edge(e);
    SkelObject obj;
    obj.a = std::min(edge.source, edge.target);
    obj.b = std::max(edge.source, edge.target);
    if (edge.source == obj.a)
      obj.ab.base = edge.p;
    else
      obj.ba.base = edge.p;
    add_object(std::move(obj));
  }

  std::vector<char> alive(g.num_nodes(), 1);
  std::vector<std::uint32_t> degree(g.num_nodes(), 0);
  for (NodeId v = 0; v < g.num_nodes(); ++v)
    degree[v] = static_cast<std::uint32_t>(adj[v].size());

  // Peel phase d = 1..w: repeatedly take the lowest-id node whose current
  // degree is exactly d. Nodes that drop below d during the phase are left
  // for the root.
  for (int d = 1; d <= width; ++d) {
    std::set<NodeId> candidates;
    for (NodeId v = 0; v < g.num_nodes(); ++v)
      if (alive[v] && degree[v] == static_cast<std::uint32_t>(d)) candidates.insert(v);

    while (!candidates.empty()) {
      NodeId v = *candidates.begin();
      candidates.erase(candidates.begin());

      Bag bag;
      bag.id = static_cast<std::uint32_t>(index.bags.size());
      bag.covered = v;
      bag.nodes.push_back(v);
      std::vector<NodeId> neighbors;
      for (const auto& [nbr, objs] : adj[v]) neighbors.push_back(nbr);
      for (NodeId nbr : neighbors) bag.nodes.push_back(nbr);

      // Consume every live object lying inside the bag.
      std::map<EdgeKey, AggregatedEdge> bag_edges;
      auto consume_between = [&](NodeId x, NodeId y) {
        auto it = adj[x].find(y);
        if (it == adj[x].end()) return;
        for (std::size_t idx : it->second) {
          SkelObject& obj = objects[idx];
          if (obj.consumed) continue;
          obj.consumed = true;
          merge_payload(bag_edges, obj.a, obj.b, obj.ab);
          merge_payload(bag_edges, obj.b, obj.a, obj.ba);
        }
      };
      for (NodeId nbr : neighbors) consume_between(v, nbr);
      for (std::size_t i = 0; i < neighbors.size(); ++i)
        for (std::size_t j = i + 1; j < neighbors.size(); ++j)
          consume_between(neighbors[i], neighbors[j]);

      for (auto& [key, edge] : bag_edges) bag.edges.push_back(edge);

      // Remove v from the skeleton, updating neighbor degrees.
      auto drop_degree = [&](NodeId u) {
        if (degree[u] == static_cast<std::uint32_t>(d)) candidates.erase(u);
        --degree[u];
        if (degree[u] == static_cast<std::uint32_t>(d)) candidates.insert(u);
      };
      for (NodeId nbr : neighbors) {
        adj[nbr].erase(v);
        drop_degree(nbr);
      }
      adj[v].clear();
      alive[v] = 0;
      degree[v] = 0;

      // Shortcut edges between the former neighbors: for each ordered pair,
      // the direct probability inside the bag combined with the two-hop path
      // through the covered node. The object is added even when both payloads
      // are zero so the skeleton keeps the clique structure.
      for (std::size_t i = 0; i < neighbors.size(); ++i) {
        for (std::size_t j = i + 1; j < neighbors.size(); ++j) {
          NodeId u = neighbors[i], x = neighbors[j];
          auto shortcut = [&](NodeId from, NodeId to) {
            double direct = pair_probability(bag_edges, from, to);
            double through = pair_probability(bag_edges, from, v) *
                             pair_probability(bag_edges, v, to);
            return 1.0 - (1.0 - direct) * (1.0 - through);
          };
          SkelObject obj;
          obj.a = u;
          obj.b = x;
          obj.ab.contrib = shortcut(u, x);
          obj.ab.origin = bag.id;
          obj.ba.contrib = shortcut(x, u);
          obj.ba.origin = bag.id;
          bool u_new = adj[u].find(x) == adj[u].end();
          add_object(std::move(obj));
          if (u_new) {  // pair was not adjacent: degrees grow
            auto bump_degree = [&](NodeId y) {
              if (degree[y] == static_cast<std::uint32_t>(d)) candidates.erase(y);
              ++degree[y];
              if (degree[y] == static_cast<std::uint32_t>(d)) candidates.insert(y);
            };
            bump_degree(u);
            bump_degree(x);
          }
        }
      }

      index.covered_by[v] = bag.id;
      index.bags.push_back(std::move(bag));
    }
  }

  // Everything still alive, plus unconsumed objects, forms the root.
  for (NodeId v = 0; v < g.num_nodes(); ++v)
    if (alive[v]) index.root_nodes.push_back(v);
  std::map<EdgeKey, AggregatedEdge> root_edges;
  for (const SkelObject& obj : objects) {
    if (obj.consumed) continue;
    merge_payload(root_edges, obj.a, obj.b, obj.ab);
    merge_payload(root_edges, obj.b, obj.a, obj.ba);
  }
  for (auto& [key, edge] : root_edges) index.root_edges.push_back(edge);

  // Parents: the first later-created bag whose node set contains the bag's
  // uncovered nodes, the root otherwise.
  for (Bag& bag : index.bags) {
    bag.parent = kRootBag;
    for (std::uint32_t b = bag.id + 1; b < index.bags.size(); ++b) {
      bool contains_all = true;
      for (NodeId v : bag.nodes) {
        if (v == bag.covered) continue;
        const auto& nodes = index.bags[b].nodes;
        if (std::find(nodes.begin(), nodes.end(), v) == nodes.end()) {
          contains_all = false;
          break;
        }
      }
      if (contains_all) {
        bag.parent = b;
        break;
      }
    }
  }

  // Levels, parents first (a parent is always created later than its child).
  for (auto it = index.bags.rbegin(); it != index.bags.rend(); ++it)
    it->level = it->parent == kRootBag ? 1 : index.bags[it->parent].level + 1;

  return index;
}

namespace {

struct LiftedState {
  std::set<NodeId> nodes;
  std::map<EdgeKey, AggregatedEdge> edges;
};

void merge_edge_into(std::map<EdgeKey, AggregatedEdge>& edges, const AggregatedEdge& add) {
  auto [it, inserted] = edges.emplace(EdgeKey{add.source, add.target}, add);
  if (inserted) return;
  AggregatedEdge& e = it->second;
  if (add.base_p > 0.0) e.base_p = add.base_p;  // at most one side holds the original
  for (const AggregatedEdge::Contribution& c : add.contributions)
    e.add_contribution(c.bag, c.p);
}

}  // namespace

ExtractedQuery extract_query_graph(const ProbTreeIndex& index, NodeId s, NodeId t) {
  if (s >= index.num_nodes || t >= index.num_nodes) throw bad_argument("unknown node id");

  // Bags on the chains from the covers of s and t up to the root.
  std::set<std::uint32_t> lift;
  for (NodeId q : {s, t}) {
    std::uint32_t b = index.covered_by[q];
    while (b != kRootBag) {
      lift.insert(b);
      b = index.bags[b].parent;
    }
  }

  // Local working copies; the index itself is never touched.
  LiftedState root;
  root.nodes.insert(index.root_nodes.begin(), index.root_nodes.end());
  for (const AggregatedEdge& e : index.root_edges)
    root.edges.emplace(EdgeKey{e.source, e.target}, e);

  std::map<std::uint32_t, LiftedState> local;
  auto state_of = [&](std::uint32_t bag_id) -> LiftedState& {
    if (bag_id == kRootBag) return root;
    auto it = local.find(bag_id);
    if (it == local.end()) {
      LiftedState st;
      const Bag& bag = index.bags[bag_id];
      st.nodes.insert(bag.nodes.begin(), bag.nodes.end());
      for (const AggregatedEdge& e : bag.edges) st.edges.emplace(EdgeKey{e.source, e.target}, e);
      it = local.emplace(bag_id, std::move(st)).first;
    }
    return it->second;
  };

  // Deepest first, so a child is folded into its parent before the parent
  // itself moves up.
  std::vector<std::uint32_t> order(lift.begin(), lift.end());
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (index.bags[a].level != index.bags[b].level)
      return index.bags[a].level > index.bags[b].level;
    return a < b;
  });

  for (std::uint32_t bag_id : order) {
    LiftedState& bag_state = state_of(bag_id);
    LiftedState& parent = state_of(index.bags[bag_id].parent);

    // Undo this bag's shortcut contribution in the parent.
    for (auto it = parent.edges.begin(); it != parent.edges.end();) {
      if (it->second.remove_contributions_of(bag_id))
        ++it;
      else
        it = parent.edges.erase(it);
    }
    // Merge the bag's own content upward.
    parent.nodes.insert(bag_state.nodes.begin(), bag_state.nodes.end());
    for (const auto& [key, edge] : bag_state.edges) merge_edge_into(parent.edges, edge);
  }

  // Materialize the root as a plain graph with dense ids.
  ExtractedQuery result;
  std::vector<NodeId> node_list(root.nodes.begin(), root.nodes.end());
  std::vector<std::uint64_t> labels;
  std::vector<NodeId> new_id(index.num_nodes, static_cast<NodeId>(-1));
  for (std::size_t i = 0; i < node_list.size(); ++i) {
    new_id[node_list[i]] = static_cast<NodeId>(i);
    labels.push_back(index.labels[node_list[i]]);
  }
  std::vector<Edge> edges;
  for (const auto& [key, edge] : root.edges) {
    double p = edge.probability();
    if (p <= 0.0) continue;
    edges.push_back(Edge{new_id[edge.source], new_id[edge.target], std::min(p, 1.0)});
  }
  result.graph = UncertainGraph::from_edges(static_cast<NodeId>(node_list.size()),
                                            std::move(edges), std::move(labels));
  if (new_id[s] == static_cast<NodeId>(-1) || new_id[t] == static_cast<NodeId>(-1))
    throw error("query node missing from the lifted root");
  result.s = new_id[s];
  result.t = new_id[t];
  return result;
}

Estimate probtree_estimate(const ProbTreeIndex& index, NodeId s, NodeId t, std::uint64_t k,
                           const EstimatorFn& inner, RandomStream& rng) {
  ExtractedQuery q = extract_query_graph(index, s, t);
  return inner(q.graph, q.s, q.t, k, rng);
}

namespace {

constexpr char kPtMagic[8] = {'S', 'T', 'R', 'E', 'L', 'P', 'T', '1'};

template <typename T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

template <typename T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}

void put_edges(std::ofstream& out, const std::vector<AggregatedEdge>& edges) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(edges.size()));
  for (const AggregatedEdge& e : edges) {
    put<std::uint32_t>(out, e.source);
    put<std::uint32_t>(out, e.target);
    put<double>(out, e.base_p);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(e.contributions.size()));
    for (const auto& c : e.contributions) {
      put<std::uint32_t>(out, c.bag);
      put<double>(out, c.p);
    }
  }
}

std::vector<AggregatedEdge> get_edges(std::ifstream& in) {
  std::uint32_t count = get<std::uint32_t>(in);
  std::vector<AggregatedEdge> edges(count);
  for (AggregatedEdge& e : edges) {
    e.source = get<std::uint32_t>(in);
    e.target = get<std::uint32_t>(in);
    e.base_p = get<double>(in);
    std::uint32_t nc = get<std::uint32_t>(in);
    e.contributions.resize(nc);
    for (auto& c : e.contributions) {
      c.bag = get<std::uint32_t>(in);
      c.p = get<double>(in);
    }
  }
  return edges;
}

}  // namespace

void save_probtree(const ProbTreeIndex& index, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open " + path + " for writing");
  out.write(kPtMagic, sizeof(kPtMagic));
  put<std::int32_t>(out, index.width);
  put<std::uint8_t>(out, index.lossy ? 1 : 0);
  put<std::uint32_t>(out, index.num_nodes);
  for (std::uint64_t label : index.labels) put<std::uint64_t>(out, label);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(index.bags.size()));
  for (const Bag& bag : index.bags) {
    put<std::uint32_t>(out, bag.id);
    put<std::uint32_t>(out, bag.covered);
    put<std::uint32_t>(out, bag.parent);
    put<std::uint32_t>(out, bag.level);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(bag.nodes.size()));
    for (NodeId v : bag.nodes) put<std::uint32_t>(out, v);
    put_edges(out, bag.edges);
  }
  put<std::uint32_t>(out, static_cast<std::uint32_t>(index.root_nodes.size()));
  for (NodeId v : index.root_nodes) put<std::uint32_t>(out, v);
  put_edges(out, index.root_edges);
  if (!out) throw io_error("write failed: " + path);
}

ProbTreeIndex load_probtree(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kPtMagic, sizeof(magic)) != 0)
    throw data_error(path + " is not a tree index file");
  ProbTreeIndex index;
  index.width = get<std::int32_t>(in);
  index.lossy = get<std::uint8_t>(in) != 0;
  index.num_nodes = get<std::uint32_t>(in);
  index.labels.resize(index.num_nodes);
  for (auto& label : index.labels) label = get<std::uint64_t>(in);
  std::uint32_t bag_count = get<std::uint32_t>(in);
  index.bags.resize(bag_count);
  index.covered_by.assign(index.num_nodes, kRootBag);
  for (Bag& bag : index.bags) {
    bag.id = get<std::uint32_t>(in);
    bag.covered = get<std::uint32_t>(in);
    bag.parent = get<std::uint32_t>(in);
    bag.level = get<std::uint32_t>(in);
    std::uint32_t nn = get<std::uint32_t>(in);
    bag.nodes.resize(nn);
    for (auto& v : bag.nodes) v = get<std::uint32_t>(in);
    bag.edges = get_edges(in);
    index.covered_by[bag.covered] = bag.id;
  }
  std::uint32_t rn = get<std::uint32_t>(in);
  index.root_nodes.resize(rn);
  for (auto& v : index.root_nodes) v = get<std::uint32_t>(in);
  index.root_edges = get_edges(in);
  if (!in) throw data_error(path + ": truncated index file");
  return index;
}

}  // namespace strel
