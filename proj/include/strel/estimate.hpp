#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "strel/graph.hpp"
#include "strel/random.hpp"

namespace strel {

// One estimator run.
struct Estimate {
  double value = 0.0;             // estimated reliability, in [0,1]
  std::uint64_t samples_used = 0; // K
  double seconds = 0.0;           // wall time of the run itself
  std::uint64_t seed = 0;         // seed of the stream that drove the run
};

// Common estimator contract shared by every sampling method and consumed by
// the bench harness. Implementations must be deterministic given the stream
// and must not retain state between calls.
using EstimatorFn =
    std::function<Estimate(const UncertainGraph&, NodeId s, NodeId t, std::uint64_t k,
                           RandomStream& rng)>;

struct EstimatorOptions {
  std::uint64_t threshold = 5;     // recursive fallback sample size
  std::uint64_t stratum_r = 50;    // stratum edge count
  std::uint64_t index_width = 1500;  // bit-vector width L
  int tree_width = 2;
  bool allow_lossy = false;
  std::string inner = "mc";        // inner estimator for "probtree"
};

// Known names: mc, bfs-sharing, rhh, rss, lp+, lp-legacy, probtree.
EstimatorFn make_estimator(const std::string& name, const UncertainGraph& g,
                           const EstimatorOptions& opts = {});

// The six benchmark estimators, in canonical order.
const std::vector<std::string>& benchmark_estimator_names();

}  // namespace strel
