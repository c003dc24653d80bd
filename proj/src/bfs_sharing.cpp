#include "strel/bfs_sharing.hpp"

#include <bit>
#include <chrono>
#include <cstring>
#include <fstream>

#include "strel/errors.hpp"

namespace strel {

namespace {

constexpr char kMagic[8] = {'S', 'T', 'R', 'E', 'L', 'B', 'X', '1'};

void write_u64(std::ofstream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint64_t read_u64(std::ifstream& in) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}

}  // namespace

std::uint64_t EdgeBitIndex::popcount(EdgeId e) const {
  std::uint64_t total = 0;
  const std::uint64_t* w = words(e);
  for (std::uint64_t i = 0; i < words_per_edge_; ++i) total += std::popcount(w[i]);
  return total;
}

EdgeBitIndex build_index(const UncertainGraph& g, std::uint64_t width, RandomStream& rng) {
  if (width < 1) throw bad_argument("index width must be >= 1");
  EdgeBitIndex index(width, g.num_edges());
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const double p = g.edge(e).p;
    std::uint64_t* w = index.words(e);
    for (std::uint64_t bit = 0; bit < width; ++bit)
      if (rng.bernoulli(p)) w[bit >> 6] |= 1ULL << (bit & 63);
  }
  return index;
}

EdgeBitIndex refresh_index(const EdgeBitIndex& index, const UncertainGraph& g,
                           RandomStream& rng) {
  if (index.num_edges() != g.num_edges()) throw bad_argument("index does not match graph");
  return build_index(g, index.width(), rng);
}

void save_index(const EdgeBitIndex& index, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open " + path + " for writing");
  out.write(kMagic, sizeof(kMagic));
  write_u64(out, index.width());
  write_u64(out, index.num_edges());
  for (EdgeId e = 0; e < index.num_edges(); ++e)
    out.write(reinterpret_cast<const char*>(index.words(e)),
              static_cast<std::streamsize>(index.words_per_edge() * sizeof(std::uint64_t)));
  if (!out) throw io_error("write failed: " + path);
}

EdgeBitIndex load_index(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(magic)) != 0)
    throw data_error(path + " is not a bit-vector index file");
  std::uint64_t width = read_u64(in);
  std::uint64_t m = read_u64(in);
  EdgeBitIndex index(width, static_cast<EdgeId>(m));
  for (EdgeId e = 0; e < index.num_edges(); ++e)
    in.read(reinterpret_cast<char*>(index.words(e)),
            static_cast<std::streamsize>(index.words_per_edge() * sizeof(std::uint64_t)));
  if (!in) throw data_error(path + ": truncated index file");
  return index;
}

NodeStateVectors::NodeStateVectors(NodeId num_nodes, std::uint64_t k)
    : k_(k),
      words_((k + 63) / 64),
      tail_mask_((k & 63) ? ((1ULL << (k & 63)) - 1) : ~0ULL),
      visited_(num_nodes, 0),
      vecs_(num_nodes) {}

namespace {

// OR (I_from AND edge bits) into I_to; reports whether I_to changed.
bool apply_edge(const EdgeBitIndex& index, EdgeId e, const std::vector<std::uint64_t>& from,
                std::vector<std::uint64_t>& to) {
  const std::uint64_t* bits = index.words(e);
  bool changed = false;
  for (std::size_t i = 0; i < to.size(); ++i) {
    std::uint64_t add = from[i] & bits[i] & ~to[i];
    if (add) {
      to[i] |= add;
      changed = true;
    }
  }
  return changed;
}

void cascade_from(NodeId u, NodeStateVectors& state, const EdgeBitIndex& index,
                  const UncertainGraph& g) {
  std::vector<NodeId> queue{u};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    NodeId w = queue[head];
    for (EdgeId e : g.out_edges(w)) {
      NodeId x = g.edge(e).target;
      if (!state.visited(x)) continue;
      if (apply_edge(index, e, state.vec(w), state.vec(x))) queue.push_back(x);
    }
  }
}

}  // namespace

void cascade_update(NodeId v, NodeId u, NodeStateVectors& state, const EdgeBitIndex& index,
                    const UncertainGraph& g) {
  for (EdgeId e : g.out_edges(v)) {
    if (g.edge(e).target != u) continue;
    if (apply_edge(index, e, state.vec(v), state.vec(u))) cascade_from(u, state, index, g);
    return;
  }
  throw bad_argument("no edge between the given nodes");
}

Estimate query(const EdgeBitIndex& index, const UncertainGraph& g, NodeId s, NodeId t,
               std::uint64_t k) {
  if (k < 1) throw bad_argument("query requires K >= 1");
  if (k > index.width())
    throw index_too_narrow_error("K = " + std::to_string(k) + " exceeds index width L = " +
                                 std::to_string(index.width()));
  if (index.num_edges() != g.num_edges()) throw bad_argument("index does not match graph");
  if (s >= g.num_nodes() || t >= g.num_nodes()) throw bad_argument("node id out of range");

  auto start = std::chrono::steady_clock::now();
  NodeStateVectors state(g.num_nodes(), k);

  state.mark_visited(s);
  state.vec(s).assign(state.words(), ~0ULL);
  state.vec(s).back() &= state.tail_mask();

  // FIFO worklist; a node may be enqueued more than once and is skipped when
  // it comes up already visited.
  std::vector<NodeId> worklist;
  for (EdgeId e : g.out_edges(s)) worklist.push_back(g.edge(e).target);

  for (std::size_t head = 0; head < worklist.size(); ++head) {
    NodeId v = worklist[head];
    if (state.visited(v)) continue;
    state.mark_visited(v);
    state.vec(v).assign(state.words(), 0);

    // Pull from every already-visited in-neighbor.
    for (EdgeId e : g.in_edges(v)) {
      NodeId in = g.edge(e).source;
      if (state.visited(in)) apply_edge(index, e, state.vec(in), state.vec(v));
    }
    // Push to out-neighbors: unvisited ones join the worklist, visited ones
    // take a cascading update. No early termination even if v == t.
    for (EdgeId e : g.out_edges(v)) {
      NodeId out = g.edge(e).target;
      if (!state.visited(out)) {
        worklist.push_back(out);
      } else if (apply_edge(index, e, state.vec(v), state.vec(out))) {
        cascade_from(out, state, index, g);
      }
    }
  }

  std::uint64_t ones = 0;
  if (state.visited(t))
    for (std::uint64_t w : state.vec(t)) ones += std::popcount(w);

  Estimate est;
  est.value = static_cast<double>(ones) / static_cast<double>(k);
  est.samples_used = k;
  est.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  est.seed = 0;
  return est;
}

}  // namespace strel
