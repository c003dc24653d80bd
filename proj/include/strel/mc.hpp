#pragma once

#include <cstdint>

#include "strel/estimate.hpp"
#include "strel/graph.hpp"

namespace strel {

struct McOptions {
  bool early_stop = true;  // end a round as soon as t is visited
};

// Hit-and-miss sampling: K rounds of BFS from s, sampling each edge on demand
// the first time the round touches it. Returns hits/K.
Estimate mc_estimate(const UncertainGraph& g, NodeId s, NodeId t, std::uint64_t k,
                     RandomStream& rng, const McOptions& opts = {});

// Closed-form estimator variance r(1-r)/K.
double mc_variance(double r_hat, std::uint64_t k);

// Smallest K such that the estimate stays within relative error `epsilon` of r
// except with probability `lambda`: ceil(3/(eps^2 r) * ln(2/lambda)).
std::uint64_t chernoff_sample_bound(double epsilon, double lambda, double r);

}  // namespace strel
