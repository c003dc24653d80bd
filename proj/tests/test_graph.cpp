#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "strel/errors.hpp"
#include "strel/graph.hpp"

using namespace strel;

TEST_CASE("parse_edge_list basic") {
  UncertainGraph g = parse_edge_list("0 1 0.5\n1 2 0.5");
  CHECK(g.num_nodes() == 3);
  CHECK(g.num_edges() == 2);
  CHECK(g.edge(0).p == 0.5);
  CHECK(g.edge(1).source == 1);
}

TEST_CASE("parse_edge_list rejects out-of-range probability") {
  CHECK_THROWS_AS(parse_edge_list("0 1 1.5"), parse_error);
  CHECK_THROWS_AS(parse_edge_list("0 1 0"), parse_error);
  CHECK_THROWS_AS(parse_edge_list("0 1 -0.25"), parse_error);
}

TEST_CASE("parse_edge_list skips comments and blank lines") {
  UncertainGraph g = parse_edge_list("# c\n0 1 0.3");
  CHECK(g.num_edges() == 1);
  CHECK(g.edge(0).p == 0.3);
  UncertainGraph g2 = parse_edge_list("0 1 0.3 # trailing\n\n  \n");
  CHECK(g2.num_edges() == 1);
}

TEST_CASE("parse_edge_list reports line numbers") {
  try {
    parse_edge_list("0 1 0.5\n0 x 0.5");
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("parse_edge_list rejects duplicates and self-loops") {
  CHECK_THROWS_AS(parse_edge_list("0 1 0.5\n0 1 0.6"), parse_error);
  CHECK_THROWS_AS(parse_edge_list("3 3 0.5"), parse_error);
  // Opposite directions are two distinct edges.
  CHECK_NOTHROW(parse_edge_list("0 1 0.5\n1 0 0.6"));
}

TEST_CASE("labels are densely renumbered in first-appearance order") {
  UncertainGraph g = parse_edge_list("10 7 0.5\n7 42 0.25");
  CHECK(g.num_nodes() == 3);
  CHECK(g.label_of(0) == 10);
  CHECK(g.label_of(1) == 7);
  CHECK(g.label_of(2) == 42);
  CHECK(*g.id_of_label(42) == 2);
  CHECK(!g.id_of_label(999).has_value());
}

TEST_CASE("serialize/parse round-trip is bit-exact") {
  RandomStream rng(7);
  for (int round = 0; round < 20; ++round) {
    UncertainGraph g = test::random_graph(rng.next_u64(), 8, 12, 1e-8, 1.0);
    UncertainGraph back = parse_edge_list(serialize_edge_list(g));
    REQUIRE(back.num_edges() == g.num_edges());
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      CHECK(back.edge(e).source == g.edge(e).source);
      CHECK(back.edge(e).target == g.edge(e).target);
      CHECK(back.edge(e).p == g.edge(e).p);  // exact, not approximate
    }
  }
}

TEST_CASE("assign_probabilities inverse out-degree") {
  // Node 0 has out-degree 4.
  UncertainGraph g = test::make_graph(
      5, {{0, 1, 2.0}, {0, 2, 9.0}, {0, 3, 1.0}, {0, 4, 5.0}, {1, 2, 3.0}});
  RandomStream rng(1);
  UncertainGraph out = assign_probabilities(g, ProbabilityModel::inverse_out_degree(), rng);
  for (EdgeId e = 0; e < 4; ++e) CHECK(out.edge(e).p == 0.25);
  CHECK(out.edge(4).p == 1.0);  // out-degree 1
}

TEST_CASE("assign_probabilities exponential cdf") {
  UncertainGraph g = test::make_graph(2, {{0, 1, 5.0}});  // weight c = 5
  RandomStream rng(1);
  UncertainGraph out = assign_probabilities(g, ProbabilityModel::exponential_cdf(5.0), rng);
  CHECK(out.edge(0).p == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("assign_probabilities fixed and uniform choice") {
  UncertainGraph g = test::make_graph(3, {{0, 1, 7.0}, {1, 2, 3.0}});
  RandomStream rng(5);
  UncertainGraph fixed = assign_probabilities(g, ProbabilityModel::fixed(0.1), rng);
  CHECK(fixed.edge(0).p == 0.1);
  CHECK(fixed.edge(1).p == 0.1);

  std::vector<double> choices = {0.1, 0.01, 0.001};
  UncertainGraph uni = assign_probabilities(g, ProbabilityModel::uniform_choice(choices), rng);
  for (EdgeId e = 0; e < 2; ++e) {
    bool found = false;
    for (double c : choices) found = found || uni.edge(e).p == c;
    CHECK(found);
  }
}

TEST_CASE("probability model parsing") {
  CHECK(ProbabilityModel::parse("inv-outdeg").kind == ProbabilityModel::Kind::inverse_out_degree);
  ProbabilityModel uni = ProbabilityModel::parse("uniform:0.1,0.01,0.001");
  CHECK(uni.choices == std::vector<double>{0.1, 0.01, 0.001});
  CHECK(ProbabilityModel::parse("exp:5").mu == 5.0);
  CHECK(ProbabilityModel::parse("fixed:0.3").value == 0.3);
  CHECK_THROWS_AS(ProbabilityModel::parse("nope"), bad_argument);
  CHECK_THROWS_AS(ProbabilityModel::parse("exp:-1"), bad_argument);
  CHECK_THROWS_AS(ProbabilityModel::parse("uniform:0.1,2.0"), bad_argument);
}

TEST_CASE("sample_world extremes") {
  UncertainGraph ones = test::make_graph(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  RandomStream rng(3);
  for (int i = 0; i < 50; ++i) {
    PossibleWorld w = sample_world(ones, rng);
    CHECK(w.test(0));
    CHECK(w.test(1));
  }
  UncertainGraph tiny = test::make_graph(2, {{0, 1, 1e-12}});
  int present = 0;
  for (int i = 0; i < 1000; ++i) present += sample_world(tiny, rng).test(0) ? 1 : 0;
  CHECK(present == 0);
}

TEST_CASE("sample_world frequency matches the edge probability") {
  UncertainGraph g = test::make_graph(2, {{0, 1, 0.5}});
  RandomStream rng(11);
  int present = 0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) present += sample_world(g, rng).test(0) ? 1 : 0;
  double freq = static_cast<double>(present) / draws;
  CHECK(freq == doctest::Approx(0.5).epsilon(0.04));  // 0.5 +- 0.02 absolute
  CHECK(std::abs(freq - 0.5) < 0.02);
}

TEST_CASE("per-edge frequencies converge within 3 sigma") {
  UncertainGraph g = test::random_graph(99, 6, 9, 0.05, 0.95);
  RandomStream rng(100);
  const int draws = 20000;
  std::vector<int> count(g.num_edges(), 0);
  for (int i = 0; i < draws; ++i) {
    PossibleWorld w = sample_world(g, rng);
    for (EdgeId e = 0; e < g.num_edges(); ++e) count[e] += w.test(e) ? 1 : 0;
  }
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    double p = g.edge(e).p;
    double sigma = std::sqrt(p * (1 - p) / draws);
    CHECK(std::abs(count[e] / static_cast<double>(draws) - p) < 3 * sigma + 1e-9);
  }
}

TEST_CASE("reachable") {
  UncertainGraph g = test::chain3(0.5);
  PossibleWorld all(g.num_edges());
  all.set(0, true);
  all.set(1, true);
  CHECK(reachable(g, all, 0, 0));  // s == t
  CHECK(reachable(g, all, 0, 2));
  PossibleWorld cut(g.num_edges());
  cut.set(0, true);
  CHECK(!reachable(g, cut, 0, 2));
  // Direction matters.
  CHECK(!reachable(g, all, 2, 0));
}
