#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "graphgen/dfs_code.hpp"
#include "graphgen/graph.hpp"
#include "graphgen/isomorphism.hpp"
#include "graphgen/rng.hpp"
#include "test_util.hpp"

using namespace graphgen;
namespace tu = graphgen::testutil;

namespace {

DfsCode make_code(std::vector<EdgeTuple> tuples) { return DfsCode{std::move(tuples)}; }

}  // namespace

TEST_CASE("tuple order: backward edges precede forward ones") {
    EdgeTuple backward{2, 0, "A", "x", "A"};
    EdgeTuple forward{2, 3, "A", "x", "A"};
    CHECK(compare_tuples(backward, forward) == Ordering::Less);
    CHECK(compare_tuples(forward, backward) == Ordering::Greater);

    // a forward edge discovering time 3 precedes backward edges emitted from
    // vertices discovered later
    EdgeTuple late_backward{3, 1, "A", "x", "A"};
    CHECK(compare_tuples(forward, late_backward) == Ordering::Less);
}

TEST_CASE("tuple order: between backward edges the smaller target wins") {
    EdgeTuple to_root{3, 0, "A", "x", "A"};
    EdgeTuple to_mid{3, 1, "A", "x", "A"};
    CHECK(compare_tuples(to_root, to_mid) == Ordering::Less);
}

TEST_CASE("tuple order: between forward edges the deeper source wins") {
    EdgeTuple from_deep{2, 3, "A", "x", "A"};
    EdgeTuple from_shallow{0, 3, "A", "x", "A"};
    CHECK(compare_tuples(from_deep, from_shallow) == Ordering::Less);
}

TEST_CASE("tuple order: labels break structural ties") {
    EdgeTuple a{0, 1, "A", "x", "A"};
    EdgeTuple b{0, 1, "A", "x", "B"};
    EdgeTuple c{0, 1, "A", "y", "A"};
    EdgeTuple d{0, 1, "B", "x", "A"};
    CHECK(compare_tuples(a, b) == Ordering::Less);
    CHECK(compare_tuples(a, c) == Ordering::Less);
    CHECK(compare_tuples(b, c) == Ordering::Less);
    CHECK(compare_tuples(c, d) == Ordering::Less);
    CHECK(compare_tuples(a, a) == Ordering::Equal);
}

TEST_CASE("tuple order is antisymmetric on random pairs") {
    Rng rng(5);
    auto random_tuple = [&rng]() {
        int a = static_cast<int>(rng.next_below(5));
        int b = static_cast<int>(rng.next_below(5));
        if (a == b) b = a + 1;
        const char* labels[] = {"A", "B", "C"};
        return EdgeTuple{a, b, labels[rng.next_below(3)], labels[rng.next_below(3)],
                         labels[rng.next_below(3)]};
    };
    for (int round = 0; round < 200; ++round) {
        EdgeTuple x = random_tuple();
        EdgeTuple y = random_tuple();
        Ordering xy = compare_tuples(x, y);
        Ordering yx = compare_tuples(y, x);
        if (xy == Ordering::Equal) {
            CHECK(yx == Ordering::Equal);
        } else {
            CHECK(yx == (xy == Ordering::Less ? Ordering::Greater : Ordering::Less));
        }
        CHECK(compare_tuples(x, x) == Ordering::Equal);
    }
}

TEST_CASE("code order is lexicographic with prefixes first") {
    EdgeTuple t1{0, 1, "A", "x", "A"};
    EdgeTuple t2{1, 2, "A", "x", "A"};
    EdgeTuple t2b{1, 2, "A", "y", "A"};
    CHECK(compare_codes(make_code({t1}), make_code({t1, t2})) == Ordering::Less);
    CHECK(compare_codes(make_code({t1, t2}), make_code({t1, t2b})) == Ordering::Less);
    CHECK(compare_codes(make_code({t1, t2}), make_code({t1, t2})) == Ordering::Equal);
    CHECK(compare_codes(make_code({t1, t2b}), make_code({t1, t2})) == Ordering::Greater);
}

TEST_CASE("minimum code of the pendant triangle is pinned") {
    DfsCode code = min_dfs_code(tu::pendant_triangle());
    DfsCode expected = make_code({
        {0, 1, "X", "a", "X"},
        {1, 2, "X", "a", "Z"},
        {2, 0, "Z", "b", "X"},
        {1, 3, "X", "b", "Y"},
    });
    CHECK(code == expected);
}

TEST_CASE("a traversal rooted at the pendant vertex codes strictly larger") {
    // same graph serialized from the pendant end; the second tuple already
    // loses on its edge label
    DfsCode rooted_elsewhere = make_code({
        {0, 1, "X", "a", "X"},
        {1, 2, "X", "b", "Z"},
        {2, 0, "Z", "a", "X"},
        {0, 3, "X", "b", "Y"},
    });
    DfsCode minimum = min_dfs_code(tu::pendant_triangle());
    CHECK(compare_codes(minimum, rooted_elsewhere) == Ordering::Less);
}

TEST_CASE("minimum code is invariant under all relabelings of the pendant triangle") {
    LabeledGraph g = tu::pendant_triangle();
    DfsCode reference = min_dfs_code(g);
    std::vector<int> perm = {0, 1, 2, 3};
    do {
        CHECK(min_dfs_code(permute_nodes(g, perm)) == reference);
    } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST_CASE("frontier search agrees with brute force on fixed shapes") {
    std::vector<LabeledGraph> shapes = {
        tu::path_graph(2),          tu::path_graph(5),
        tu::cycle_graph(4),         tu::cycle_graph(6),
        tu::complete_graph(3),      tu::complete_graph(4),
        tu::star_graph(4),          tu::pendant_triangle(),
        tu::complete_graph(5),
    };

    LabeledGraph mixed_star;
    mixed_star.add_node("C");
    mixed_star.add_node("B");
    mixed_star.add_node("A");
    mixed_star.add_node("B");
    mixed_star.add_edge(0, 1, "x");
    mixed_star.add_edge(0, 2, "y");
    mixed_star.add_edge(0, 3, "x");
    shapes.push_back(mixed_star);

    LabeledGraph alternating_cycle;
    for (int i = 0; i < 6; ++i) alternating_cycle.add_node(i % 2 ? "A" : "B");
    for (int i = 0; i < 6; ++i) alternating_cycle.add_edge(i, (i + 1) % 6, i % 2 ? "x" : "y");
    shapes.push_back(alternating_cycle);

    for (const LabeledGraph& g : shapes) {
        CHECK(min_dfs_code(g) == brute_force_min_dfs_code(g));
    }
}

TEST_CASE("frontier search agrees with brute force on random graphs") {
    Rng rng(99);
    for (int round = 0; round < 60; ++round) {
        int n = 2 + static_cast<int>(rng.next_below(5));
        LabeledGraph g = tu::random_connected_graph(rng, n, static_cast<int>(rng.next_below(4)),
                                                    {"A", "B"}, {"x", "y"});
        DfsCode fast = min_dfs_code(g);
        DfsCode slow = brute_force_min_dfs_code(g);
        CHECK(fast == slow);
    }
}

TEST_CASE("isomorphic graphs share a code, non-isomorphic graphs do not") {
    Rng rng(4242);
    for (int round = 0; round < 40; ++round) {
        int n = 3 + static_cast<int>(rng.next_below(4));
        LabeledGraph g = tu::random_connected_graph(rng, n, static_cast<int>(rng.next_below(3)),
                                                    {"A", "B"}, {"x"});
        LabeledGraph p = permute_nodes(g, tu::random_permutation(rng, n));
        CHECK(min_dfs_code(g) == min_dfs_code(p));
    }

    // same counts, different wiring
    LabeledGraph c6 = tu::cycle_graph(6);
    LabeledGraph p6 = tu::path_graph(6);
    p6.add_edge(0, 2, "x");
    REQUIRE(!is_isomorphic(c6, p6));
    CHECK(min_dfs_code(c6) != min_dfs_code(p6));
}

TEST_CASE("valid_extensions forces a pending backward edge") {
    LabeledGraph g = tu::cycle_graph(4);
    SearchState s;
    s.node_of_time = {0, 1, 2, 3};
    s.time_of_node = {0, 1, 2, 3};
    s.rightmost_path = {0, 1, 2, 3};
    s.edge_used = {1, 1, 1, 0};
    s.code.tuples = {
        {0, 1, "A", "x", "A"},
        {1, 2, "A", "x", "A"},
        {2, 3, "A", "x", "A"},
    };

    auto ext = valid_extensions(s, g);
    REQUIRE(ext.size() == 1);
    CHECK(ext[0].first == EdgeTuple{3, 0, "A", "x", "A"});
    CHECK(ext[0].second.complete(g));
    CHECK(ext[0].second.rightmost_path == s.rightmost_path);
}

TEST_CASE("valid_extensions descends from the deepest vertex that still has work") {
    // path 0-1-2 fully emitted; node 1 still owns an edge to the unvisited 3.
    LabeledGraph g;
    for (int i = 0; i < 4; ++i) g.add_node("A");
    g.add_edge(0, 1, "x");
    g.add_edge(1, 2, "x");
    g.add_edge(1, 3, "x");

    SearchState s;
    s.node_of_time = {0, 1, 2};
    s.time_of_node = {0, 1, 2, -1};
    s.rightmost_path = {0, 1, 2};
    s.edge_used = {1, 1, 0};
    s.code.tuples = {
        {0, 1, "A", "x", "A"},
        {1, 2, "A", "x", "A"},
    };

    auto ext = valid_extensions(s, g);
    REQUIRE(ext.size() == 1);
    CHECK(ext[0].first == EdgeTuple{1, 3, "A", "x", "A"});
    // node 2 is exhausted, so the path retreats to node 1 before descending
    CHECK(ext[0].second.rightmost_path == std::vector<int>{0, 1, 3});
    CHECK(ext[0].second.node_of_time == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("valid_extensions offers every undiscovered neighbor of the branch vertex") {
    LabeledGraph g = tu::star_graph(3);
    SearchState s;
    s.node_of_time = {0, 1};
    s.time_of_node = {0, 1, -1, -1};
    s.rightmost_path = {0, 1};
    s.edge_used = {1, 0, 0};
    s.code.tuples = {{0, 1, "A", "x", "A"}};

    auto ext = valid_extensions(s, g);
    CHECK(ext.size() == 2);
    for (const auto& [tuple, next] : ext) {
        CHECK(tuple == EdgeTuple{0, 2, "A", "x", "A"});
        CHECK(next.rightmost_path == std::vector<int>{0, 2});
    }
}

TEST_CASE("valid_extensions on a complete state is empty") {
    LabeledGraph g = tu::path_graph(2);
    SearchState s;
    s.node_of_time = {0, 1};
    s.time_of_node = {0, 1};
    s.rightmost_path = {0, 1};
    s.edge_used = {1};
    s.code.tuples = {{0, 1, "A", "x", "A"}};
    CHECK(valid_extensions(s, g).empty());
}

TEST_CASE("strict decode inverts canonization up to isomorphism") {
    Rng rng(314);
    for (int round = 0; round < 40; ++round) {
        int n = 2 + static_cast<int>(rng.next_below(6));
        LabeledGraph g = tu::random_connected_graph(rng, n, static_cast<int>(rng.next_below(4)),
                                                    {"A", "B", "C"}, {"x", "y"});
        LabeledGraph back = decode(min_dfs_code(g), DecodeMode::Strict);
        CHECK(is_isomorphic(g, back));
    }
}

TEST_CASE("strict decode rejects malformed codes") {
    CHECK_THROWS_AS(decode(make_code({{1, 2, "A", "x", "A"}}), DecodeMode::Strict),
                    std::invalid_argument);
    CHECK_THROWS_AS(decode(make_code({{0, 0, "A", "x", "A"}}), DecodeMode::Strict),
                    std::invalid_argument);
    // forward target skips a timestamp
    CHECK_THROWS_AS(
        decode(make_code({{0, 1, "A", "x", "A"}, {1, 3, "A", "x", "A"}}), DecodeMode::Strict),
        std::invalid_argument);
    // label conflict on an established node
    CHECK_THROWS_AS(
        decode(make_code({{0, 1, "A", "x", "A"}, {1, 2, "B", "x", "A"}}), DecodeMode::Strict),
        std::invalid_argument);
    // duplicate edge via a backward tuple
    CHECK_THROWS_AS(
        decode(make_code({{0, 1, "A", "x", "A"}, {1, 0, "A", "x", "A"}}), DecodeMode::Strict),
        std::invalid_argument);
    // backward edge into the future
    CHECK_THROWS_AS(
        decode(make_code({{0, 1, "A", "x", "A"}, {5, 0, "A", "x", "A"}}), DecodeMode::Strict),
        std::invalid_argument);
}

TEST_CASE("lenient decode repairs model output") {
    DfsCode messy = make_code({
        {0, 1, "A", "x", "B"},
        {1, 1, "B", "x", "B"},  // self edge: dropped
        {1, 0, "B", "y", "A"},  // duplicate of the first edge: dropped
        {1, 2, "Q", "x", "C"},  // label conflict on node 1: first label wins
        {7, 8, "D", "z", "D"},  // disconnected piece: removed with the MCC cut
    });
    LabeledGraph g = decode(messy, DecodeMode::Lenient);
    REQUIRE(g.node_count() == 3);
    CHECK(g.node_label(0) == "A");
    CHECK(g.node_label(1) == "B");
    CHECK(g.node_label(2) == "C");
    CHECK(g.edge_count() == 2);
    CHECK(*g.edge_label_between(0, 1) == "x");
    CHECK(*g.edge_label_between(1, 2) == "x");
    CHECK(validate_graph(g).ok);
}

TEST_CASE("lenient decode equals strict decode on well-formed codes") {
    Rng rng(808);
    for (int round = 0; round < 20; ++round) {
        int n = 2 + static_cast<int>(rng.next_below(5));
        LabeledGraph g = tu::random_connected_graph(rng, n, static_cast<int>(rng.next_below(3)),
                                                    {"A", "B"}, {"x", "y"});
        DfsCode code = min_dfs_code(g);
        CHECK(is_isomorphic(decode(code, DecodeMode::Strict), decode(code, DecodeMode::Lenient)));
    }
}

TEST_CASE("degenerate inputs") {
    LabeledGraph single;
    single.add_node("A");
    CHECK(min_dfs_code(single).empty());
    CHECK(brute_force_min_dfs_code(single).empty());
    CHECK(decode(DfsCode{}, DecodeMode::Lenient).node_count() == 0);

    LabeledGraph empty;
    CHECK_THROWS_AS(min_dfs_code(empty), std::invalid_argument);

    LabeledGraph disconnected = tu::path_graph(2);
    disconnected.add_node("B");
    CHECK_THROWS_AS(min_dfs_code(disconnected), std::invalid_argument);

    LabeledGraph looped = tu::path_graph(2);
    looped.add_edge(1, 1, "x");
    CHECK_THROWS_AS(min_dfs_code(looped), std::invalid_argument);

    CHECK_THROWS_AS(brute_force_min_dfs_code(tu::path_graph(9)), std::invalid_argument);
}

TEST_CASE("the frontier search expands far fewer states than enumeration") {
    // distinct leaf labels let the bound prune, while the enumeration still
    // walks every leaf ordering
    LabeledGraph star;
    star.add_node("Z");
    const char* leaves[] = {"A", "B", "C", "D", "E", "F"};
    for (const char* l : leaves) {
        int leaf = star.add_node(l);
        star.add_edge(0, leaf, "x");
    }

    CanonizeStats fast;
    BruteForceStats slow;
    DfsCode code = min_dfs_code(star, {}, &fast);
    CHECK(code == brute_force_min_dfs_code(star, 8, &slow));
    CHECK(fast.expansions > 0);
    CHECK(fast.peak_frontier > 0);
    CHECK(fast.expansions * 10 < slow.states_visited);
}

TEST_CASE("the frontier cap aborts pathological searches") {
    CanonizeOptions tiny{.frontier_cap = 3};
    CHECK_THROWS_AS(min_dfs_code(tu::complete_graph(5), tiny), std::runtime_error);
}

TEST_CASE("code_to_text renders tuples and quotes awkward labels") {
    DfsCode code = make_code({
        {0, 1, "X", "a", "X"},
        {1, 2, "X", "a", "Z"},
    });
    CHECK(code_to_text(code) == "(0,1,X,a,X) (1,2,X,a,Z)");

    DfsCode awkward = make_code({{0, 1, "2, 1.00, A", "x", "say \"hi\""}});
    CHECK(code_to_text(awkward) == "(0,1,\"2, 1.00, A\",x,\"say \\\"hi\\\"\")");
}

TEST_CASE("canonize_all matches the serial reference on every thread count") {
    Rng rng(1000);
    std::vector<LabeledGraph> graphs;
    for (int i = 0; i < 30; ++i) {
        int n = 2 + static_cast<int>(rng.next_below(6));
        graphs.push_back(tu::random_connected_graph(rng, n, static_cast<int>(rng.next_below(4)),
                                                    {"A", "B"}, {"x", "y"}));
    }
    std::vector<CanonizeStats> serial_stats;
    std::vector<DfsCode> serial = canonize_all(graphs, 1, {}, &serial_stats);
    REQUIRE(serial.size() == graphs.size());
    REQUIRE(serial_stats.size() == graphs.size());

    for (int threads : {0, 2, 4}) {
        std::vector<DfsCode> parallel = canonize_all(graphs, threads);
        CHECK(parallel == serial);
    }
}
