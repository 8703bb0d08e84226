#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "graphgen/graph.hpp"
#include "graphgen/isomorphism.hpp"
#include "graphgen/rng.hpp"
#include "test_util.hpp"

using namespace graphgen;
namespace tu = graphgen::testutil;

TEST_CASE("permuted copies are isomorphic") {
    LabeledGraph g = tu::pendant_triangle();
    LabeledGraph p = permute_nodes(g, {3, 1, 0, 2});
    CHECK(is_isomorphic(g, p));
    CHECK(is_isomorphic(p, g));
}

TEST_CASE("changing one node label breaks isomorphism") {
    LabeledGraph g = tu::pendant_triangle();
    LabeledGraph h;
    h.add_node("X");
    h.add_node("X");
    h.add_node("Z");
    h.add_node("Z");
    h.add_edge(0, 1, "a");
    h.add_edge(1, 2, "a");
    h.add_edge(2, 0, "b");
    h.add_edge(1, 3, "b");
    CHECK(!is_isomorphic(g, h));
}

TEST_CASE("changing one edge label breaks isomorphism") {
    LabeledGraph g = tu::cycle_graph(4);
    LabeledGraph h = tu::cycle_graph(4);
    LabeledGraph h2;
    for (int i = 0; i < 4; ++i) h2.add_node("A");
    h2.add_edge(0, 1, "x");
    h2.add_edge(1, 2, "x");
    h2.add_edge(2, 3, "x");
    h2.add_edge(3, 0, "y");
    CHECK(is_isomorphic(g, h));
    CHECK(!is_isomorphic(g, h2));
}

TEST_CASE("same degree sequence is not enough") {
    // one 6-cycle versus two triangles: all degrees 2, same labels
    LabeledGraph c6 = tu::cycle_graph(6);
    LabeledGraph two_triangles;
    for (int i = 0; i < 6; ++i) two_triangles.add_node("A");
    two_triangles.add_edge(0, 1, "x");
    two_triangles.add_edge(1, 2, "x");
    two_triangles.add_edge(2, 0, "x");
    two_triangles.add_edge(3, 4, "x");
    two_triangles.add_edge(4, 5, "x");
    two_triangles.add_edge(5, 3, "x");
    CHECK(!is_isomorphic(c6, two_triangles));
}

TEST_CASE("containment is non-induced") {
    // a 3-path embeds into a triangle even though the closing edge exists
    LabeledGraph p3 = tu::path_graph(3);
    LabeledGraph k3 = tu::complete_graph(3);
    CHECK(subgraph_isomorphic(p3, k3));
    CHECK(!subgraph_isomorphic(k3, p3));
}

TEST_CASE("containment respects node and edge labels") {
    LabeledGraph pattern;
    pattern.add_node("A");
    pattern.add_node("B");
    pattern.add_edge(0, 1, "x");

    LabeledGraph target;
    target.add_node("A");
    target.add_node("B");
    target.add_node("B");
    target.add_edge(0, 1, "y");
    target.add_edge(0, 2, "x");
    CHECK(subgraph_isomorphic(pattern, target));

    LabeledGraph target2;
    target2.add_node("A");
    target2.add_node("B");
    target2.add_edge(0, 1, "y");
    CHECK(!subgraph_isomorphic(pattern, target2));
}

TEST_CASE("a graph embeds into itself and into supergraphs") {
    Rng rng(11);
    for (int round = 0; round < 20; ++round) {
        LabeledGraph g =
            tu::random_connected_graph(rng, 6, 3, {"A", "B", "C"}, {"x", "y"});
        CHECK(subgraph_isomorphic(g, g));

        LabeledGraph super = g;
        int extra = super.add_node("A");
        super.add_edge(0, extra, "x");
        CHECK(subgraph_isomorphic(g, super));
        CHECK(!subgraph_isomorphic(super, g));
    }
}

TEST_CASE("random permuted copies stay isomorphic") {
    Rng rng(23);
    for (int round = 0; round < 25; ++round) {
        int n = 3 + static_cast<int>(rng.next_below(6));
        LabeledGraph g = tu::random_connected_graph(rng, n, static_cast<int>(rng.next_below(4)),
                                                    {"A", "B"}, {"x", "y"});
        LabeledGraph p = permute_nodes(g, tu::random_permutation(rng, n));
        CHECK(is_isomorphic(g, p));
    }
}

TEST_CASE("count mismatches are rejected before searching") {
    CHECK(subgraph_match(tu::path_graph(5), tu::path_graph(4)) == MatchOutcome::NotFound);
    CHECK(subgraph_match(tu::complete_graph(3), tu::path_graph(3)) == MatchOutcome::NotFound);

    LabeledGraph labeled = tu::path_graph(3, "Q");
    CHECK(subgraph_match(labeled, tu::path_graph(8)) == MatchOutcome::NotFound);
}

TEST_CASE("exhausted budget reports BudgetExceeded") {
    // unlabeled-ish 3-regular graphs force real search work
    LabeledGraph pattern = tu::cycle_graph(12);
    LabeledGraph target = tu::cycle_graph(16);
    MatchOptions tiny{.max_expansions = 3};
    CHECK(subgraph_match(pattern, target, tiny) == MatchOutcome::BudgetExceeded);
    CHECK(!subgraph_isomorphic(pattern, target, tiny));
}

TEST_CASE("empty pattern matches anything") {
    LabeledGraph empty;
    CHECK(subgraph_match(empty, tu::path_graph(2)) == MatchOutcome::Found);
}
