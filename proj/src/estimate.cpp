#include "strel/estimate.hpp"

#include <memory>

#include "strel/bfs_sharing.hpp"
#include "strel/errors.hpp"
#include "strel/lazy.hpp"
#include "strel/mc.hpp"
#include "strel/probtree.hpp"
#include "strel/rhh.hpp"
#include "strel/rss.hpp"

namespace strel {

namespace {

// Estimators usable both standalone and as the inner method of the tree
// index; none of them captures per-graph state.
EstimatorFn make_plain(const std::string& name, const EstimatorOptions& opts) {
  if (name == "mc") {
    return [](const UncertainGraph& g, NodeId s, NodeId t, std::uint64_t k, RandomStream& rng) {
      return mc_estimate(g, s, t, k, rng);
    };
  }
  if (name == "lp+") {
    return [](const UncertainGraph& g, NodeId s, NodeId t, std::uint64_t k, RandomStream& rng) {
      return lp_plus_estimate(g, s, t, k, rng);
    };
  }
  if (name == "lp-legacy") {
    return [](const UncertainGraph& g, NodeId s, NodeId t, std::uint64_t k, RandomStream& rng) {
      return lp_legacy_estimate(g, s, t, k, rng);
    };
  }
  if (name == "rhh") {
    RhhParams params{opts.threshold};
    return [params](const UncertainGraph& g, NodeId s, NodeId t, std::uint64_t k,
                    RandomStream& rng) { return rhh_estimate(g, s, t, k, params, rng); };
  }
  if (name == "rss") {
    RssParams params{opts.stratum_r, opts.threshold};
    return [params](const UncertainGraph& g, NodeId s, NodeId t, std::uint64_t k,
                    RandomStream& rng) { return rss_estimate(g, s, t, k, params, rng); };
  }
  if (name == "bfs-sharing") {
    // A fresh index per call keeps successive estimates independent; the
    // reported time covers the shared BFS only, the (re)sampling cost is
    // accounted for separately by the bench harness.
    return [](const UncertainGraph& g, NodeId s, NodeId t, std::uint64_t k, RandomStream& rng) {
      RandomStream build_rng = rng.split(0);
      EdgeBitIndex index = build_index(g, k, build_rng);
      Estimate est = query(index, g, s, t, k);
      est.seed = build_rng.seed();
      return est;
    };
  }
  throw bad_argument("unknown estimator: " + name);
}

}  // namespace

EstimatorFn make_estimator(const std::string& name, const UncertainGraph& g,
                           const EstimatorOptions& opts) {
  if (name == "probtree") {
    if (opts.inner != "mc" && opts.inner != "lp+" && opts.inner != "rhh" && opts.inner != "rss")
      throw bad_argument("probtree inner estimator must be one of mc, lp+, rhh, rss");
    auto index = std::make_shared<const ProbTreeIndex>(
        build_fwd_index(g, opts.tree_width, opts.allow_lossy));
    EstimatorFn inner = make_plain(opts.inner, opts);
    return [index, inner](const UncertainGraph& graph, NodeId s, NodeId t, std::uint64_t k,
                          RandomStream& rng) {
      if (graph.num_nodes() != index->num_nodes)
        throw bad_argument("graph does not match the tree index");
      return probtree_estimate(*index, s, t, k, inner, rng);
    };
  }
  (void)g;
  return make_plain(name, opts);
}

const std::vector<std::string>& benchmark_estimator_names() {
  static const std::vector<std::string> names = {"mc",  "bfs-sharing", "rhh",
                                                 "rss", "lp+",         "probtree"};
  return names;
}

}  // namespace strel
