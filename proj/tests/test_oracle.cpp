#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "strel/errors.hpp"
#include "strel/oracle.hpp"

using namespace strel;

TEST_CASE("world_probability direct products") {
  UncertainGraph g = test::make_graph(3, {{0, 1, 0.5}, {1, 2, 0.8}});
  PossibleWorld both(2);
  both.set(0, true);
  both.set(1, true);
  CHECK(oracle::world_probability(g, both) == doctest::Approx(0.4).epsilon(1e-15));
  PossibleWorld first(2);
  first.set(0, true);
  CHECK(oracle::world_probability(g, first) == doctest::Approx(0.1).epsilon(1e-15));
  UncertainGraph empty = UncertainGraph::from_edges(1, {});
  CHECK(oracle::world_probability(empty, PossibleWorld(0)) == 1.0);
}

TEST_CASE("world probabilities sum to one over all masks") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    UncertainGraph g = test::random_graph(seed, 6, 10, 0.05, 0.95);
    double total = 0.0;
    for (std::uint64_t mask = 0; mask < (1ULL << g.num_edges()); ++mask) {
      PossibleWorld w(g.num_edges());
      for (EdgeId e = 0; e < g.num_edges(); ++e) w.set(e, (mask >> e) & 1);
      double pr = oracle::world_probability(g, w);
      CHECK(pr >= 0.0);
      CHECK(pr <= 1.0);
      total += pr;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("exact_reliability single edge and s == t") {
  UncertainGraph g = test::make_graph(2, {{0, 1, 0.37}});
  CHECK(oracle::exact_reliability(g, 0, 1) == doctest::Approx(0.37).epsilon(1e-15));
  CHECK(oracle::exact_reliability(g, 0, 0) == 1.0);
  CHECK(oracle::exact_reliability(g, 1, 0) == 0.0);
}

TEST_CASE("exact_reliability series-parallel combination") {
  // Direct 0.75 edge in parallel with a two-edge 0.5 * 0.5 path.
  UncertainGraph g = test::make_graph(3, {{0, 2, 0.75}, {0, 1, 0.5}, {1, 2, 0.5}});
  CHECK(oracle::exact_reliability(g, 0, 2) == doctest::Approx(0.8125).epsilon(1e-15));
}

TEST_CASE("exact_reliability diamond, cross-checked against a second enumeration") {
  UncertainGraph g = test::diamond();
  double direct = test::brute_force_reliability(g, 0, 3);
  CHECK(direct == doctest::Approx(0.4375).epsilon(1e-15));
  CHECK(oracle::exact_reliability(g, 0, 3) == doctest::Approx(direct).epsilon(1e-15));
}

TEST_CASE("exact_reliability matches the independent enumeration on random graphs") {
  for (std::uint64_t seed = 10; seed < 20; ++seed) {
    UncertainGraph g = test::random_graph(seed, 7, 12, 0.1, 0.9);
    for (NodeId t = 1; t < 4; ++t)
      CHECK(oracle::exact_reliability(g, 0, t) ==
            doctest::Approx(test::brute_force_reliability(g, 0, t)).epsilon(1e-12));
  }
}

TEST_CASE("edge budget guard") {
  std::vector<Edge> edges;
  for (NodeId i = 0; i < 26; ++i) edges.push_back(Edge{i, static_cast<NodeId>(i + 1), 0.5});
  UncertainGraph g = UncertainGraph::from_edges(27, std::move(edges));
  CHECK_THROWS_AS(oracle::exact_reliability(g, 0, 26), edge_budget_error);
}

TEST_CASE("monotonicity: raising an edge probability never lowers reliability") {
  RandomStream rng(21);
  for (int round = 0; round < 15; ++round) {
    UncertainGraph g = test::random_graph(rng.next_u64(), 6, 10, 0.1, 0.8);
    double base = oracle::exact_reliability(g, 0, 5);
    EdgeId e = static_cast<EdgeId>(rng.uniform_int(g.num_edges()));
    double raised_p = g.edge(e).p + (1.0 - g.edge(e).p) * 0.5;
    double raised = oracle::exact_reliability(g.with_edge_probability(e, raised_p), 0, 5);
    CHECK(raised >= base - 1e-12);
  }
}

TEST_CASE("deletion consistency: removing an edge never raises reliability") {
  RandomStream rng(22);
  for (int round = 0; round < 15; ++round) {
    UncertainGraph g = test::random_graph(rng.next_u64(), 6, 10, 0.1, 0.8);
    double base = oracle::exact_reliability(g, 0, 5);
    EdgeId victim = static_cast<EdgeId>(rng.uniform_int(g.num_edges()));
    std::vector<Edge> edges;
    for (EdgeId e = 0; e < g.num_edges(); ++e)
      if (e != victim) edges.push_back(g.edge(e));
    UncertainGraph smaller = UncertainGraph::from_edges(g.num_nodes(), std::move(edges));
    CHECK(oracle::exact_reliability(smaller, 0, 5) <= base + 1e-12);
  }
}

TEST_CASE("factorization over one edge is exact") {
  RandomStream rng(23);
  for (int round = 0; round < 15; ++round) {
    UncertainGraph g = test::random_graph(rng.next_u64(), 6, 10, 0.1, 0.9);
    double r = oracle::exact_reliability(g, 0, 5);
    for (EdgeId e = 0; e < g.num_edges(); e += 3) {
      oracle::Condition present;
      present.forced_present = {e};
      oracle::Condition absent;
      absent.forced_absent = {e};
      double combined = g.edge(e).p * oracle::exact_reliability(g, 0, 5, present) +
                        (1.0 - g.edge(e).p) * oracle::exact_reliability(g, 0, 5, absent);
      CHECK(std::abs(combined - r) < 1e-12);
    }
  }
}

TEST_CASE("all-pairs matrix agrees with single-pair calls") {
  UncertainGraph g = test::random_graph(31, 6, 10, 0.1, 0.9);
  auto matrix = oracle::exact_reliability_matrix(g);
  for (NodeId s = 0; s < g.num_nodes(); ++s)
    for (NodeId t = 0; t < g.num_nodes(); ++t)
      CHECK(matrix[s][t] == doctest::Approx(oracle::exact_reliability(g, s, t)).epsilon(1e-12));
}
