#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>

#include "graphgen/codec.hpp"
#include "graphgen/dfs_code.hpp"
#include "graphgen/rng.hpp"
#include "test_util.hpp"

using namespace graphgen;
namespace tu = graphgen::testutil;

namespace {

std::vector<LabeledGraph> tiny_dataset() {
    LabeledGraph pair;
    pair.add_node("N");
    pair.add_node("C");
    pair.add_edge(0, 1, "double");
    return {tu::pendant_triangle(), pair};
}

}  // namespace

TEST_CASE("build_vocab sizes every block from the dataset") {
    VocabSpec vocab = build_vocab(tiny_dataset());

    // largest graph has 4 nodes, so timestamps 0..3 plus EOS
    CHECK(vocab.dim_t == 5);
    CHECK(vocab.node_labels == std::vector<std::string>{"C", "N", "X", "Y", "Z"});
    CHECK(vocab.edge_labels == std::vector<std::string>{"a", "b", "double"});
    CHECK(vocab.dim_node() == 6);
    CHECK(vocab.dim_edge() == 4);
    CHECK(vocab.k() == 2 * 5 + 2 * 6 + 4);

    CHECK(vocab.time_eos() == 4);
    CHECK(vocab.node_eos() == 5);
    CHECK(vocab.edge_eos() == 3);

    CHECK(vocab.offset(0) == 0);
    CHECK(vocab.offset(1) == 5);
    CHECK(vocab.offset(2) == 10);
    CHECK(vocab.offset(3) == 16);
    CHECK(vocab.offset(4) == 20);

    CHECK_THROWS_AS(build_vocab({}), std::invalid_argument);
}

TEST_CASE("label lookups are sorted-order indices") {
    VocabSpec vocab = build_vocab(tiny_dataset());
    CHECK(vocab.node_index("C") == 0);
    CHECK(vocab.node_index("Z") == 4);
    CHECK(vocab.edge_index("double") == 2);
    CHECK_THROWS_AS(vocab.node_index("missing"), std::out_of_range);
    CHECK_THROWS_AS(vocab.edge_index("single"), std::out_of_range);
}

TEST_CASE("encode_sequence emits one step per tuple plus the terminator") {
    VocabSpec vocab = build_vocab(tiny_dataset());
    DfsCode code = min_dfs_code(tu::pendant_triangle());
    EncodedSequence seq = encode_sequence(code, vocab);

    REQUIRE(seq.steps.size() == code.size() + 1);
    CHECK(seq.steps[0] == EncodedStep{0, 1, 2, 0, 2});
    CHECK(seq.steps[1] == EncodedStep{1, 2, 2, 0, 4});
    CHECK(seq.steps[2] == EncodedStep{2, 0, 4, 1, 2});
    CHECK(seq.steps[3] == EncodedStep{1, 3, 2, 1, 3});
    CHECK(seq.steps[4] == eos_step(vocab));
    CHECK(is_eos(seq.steps[4], vocab));
    CHECK(!is_eos(seq.steps[0], vocab));
}

TEST_CASE("decode_step inverts encoding and stops on any EOS component") {
    VocabSpec vocab = build_vocab(tiny_dataset());
    DfsCode code = min_dfs_code(tu::pendant_triangle());
    EncodedSequence seq = encode_sequence(code, vocab);

    for (std::size_t i = 0; i < code.size(); ++i) {
        auto tuple = decode_step(seq.steps[i], vocab);
        REQUIRE(tuple.has_value());
        CHECK(*tuple == code.tuples[i]);
    }
    CHECK(!decode_step(seq.steps.back(), vocab).has_value());

    EncodedStep partial_eos{0, 1, vocab.node_eos(), 0, 0};
    CHECK(!decode_step(partial_eos, vocab).has_value());

    EncodedStep bad{0, 1, 99, 0, 0};
    CHECK_THROWS_AS(decode_step(bad, vocab), std::out_of_range);
    EncodedStep bad_time{-1, 1, 0, 0, 0};
    CHECK_THROWS_AS(decode_step(bad_time, vocab), std::out_of_range);
}

TEST_CASE("encode_sequence rejects out-of-vocabulary input") {
    VocabSpec vocab = build_vocab(tiny_dataset());

    DfsCode wrong_label;
    wrong_label.tuples.push_back({0, 1, "X", "missing", "X"});
    CHECK_THROWS_AS(encode_sequence(wrong_label, vocab), std::out_of_range);

    // timestamp 4 collides with the EOS slot of dim_t = 5
    DfsCode too_long;
    too_long.tuples.push_back({0, 1, "X", "a", "X"});
    too_long.tuples.push_back({1, 2, "X", "a", "X"});
    too_long.tuples.push_back({2, 3, "X", "a", "X"});
    too_long.tuples.push_back({3, 4, "X", "a", "X"});
    CHECK_THROWS_AS(encode_sequence(too_long, vocab), std::out_of_range);
}

TEST_CASE("step_onehot sets exactly the five component bits") {
    VocabSpec vocab = build_vocab(tiny_dataset());
    EncodedStep step{1, 3, 2, 1, 4};
    std::vector<double> v = step_onehot(step, vocab);

    REQUIRE(static_cast<int>(v.size()) == vocab.k());
    double total = 0;
    for (double x : v) total += x;
    CHECK(total == doctest::Approx(5.0));
    CHECK(v[vocab.offset(0) + 1] == 1.0);
    CHECK(v[vocab.offset(1) + 3] == 1.0);
    CHECK(v[vocab.offset(2) + 2] == 1.0);
    CHECK(v[vocab.offset(3) + 1] == 1.0);
    CHECK(v[vocab.offset(4) + 4] == 1.0);
}

TEST_CASE("round trip through indices preserves random codes") {
    Rng rng(77);
    for (int round = 0; round < 25; ++round) {
        int n = 2 + static_cast<int>(rng.next_below(5));
        LabeledGraph g = tu::random_connected_graph(rng, n, static_cast<int>(rng.next_below(3)),
                                                    {"A", "B", "C"}, {"x", "y"});
        VocabSpec vocab = build_vocab({g});
        DfsCode code = min_dfs_code(g);
        EncodedSequence seq = encode_sequence(code, vocab);
        DfsCode back;
        for (const EncodedStep& step : seq.steps) {
            auto tuple = decode_step(step, vocab);
            if (!tuple) break;
            back.tuples.push_back(*tuple);
        }
        CHECK(back == code);
    }
}
