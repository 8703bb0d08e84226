#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "graphgen/graph.hpp"

namespace graphgen {

/*
 * Line-oriented graph dataset format:
 *
 *   t # <index>
 *   v <id> <label>
 *   e <u> <v> <label>
 *
 * Node ids are dense and ascending within each graph; edge endpoints refer
 * to already-declared ids. Labels are whitespace-free UTF-8 tokens; datasets
 * without edge labels conventionally use the sentinel "_". Blank lines are
 * ignored. Output is bit-exact: single spaces, "\n" newlines, sequential
 * graph indices.
 */

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& reason);
    int line() const { return line_; }

private:
    int line_;
};

class ValidationError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class TooFewGraphs : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// What to do with a graph that parses but breaks the model-domain
// invariants (self-loops, parallel edges, disconnected, empty).
enum class InvalidGraphPolicy { Strict, Skip };

std::vector<LabeledGraph> parse_graphs_text(const std::string& text,
                                            InvalidGraphPolicy policy = InvalidGraphPolicy::Strict);
std::vector<LabeledGraph> parse_dataset(const std::string& path,
                                        InvalidGraphPolicy policy = InvalidGraphPolicy::Strict);

std::string write_graphs_text(const std::vector<LabeledGraph>& graphs);
void write_dataset(const std::string& path, const std::vector<LabeledGraph>& graphs);

struct SplitRatios {
    double train = 0.8;
    double validation = 0.1;
    double test = 0.1;
};

struct DatasetSplit {
    std::vector<LabeledGraph> train;
    std::vector<LabeledGraph> validation;
    std::vector<LabeledGraph> test;
    SplitRatios ratios;
    std::uint64_t seed = 0;
};

/*
 * Seeded shuffle followed by a contiguous partition. The three parts are
 * disjoint and cover the input. Throws std::invalid_argument for bad
 * ratios and TooFewGraphs when the train part would come out empty.
 */
DatasetSplit split_dataset(const std::vector<LabeledGraph>& graphs, const SplitRatios& ratios,
                           std::uint64_t seed);

struct RwrConfig {
    double restart_prob = 0.15;
    int iterations = 150;
    int samples = 1;
    std::uint64_t seed = 1;
    int threads = 0;
};

/*
 * Random walk with restarts over a connected graph: the start node is drawn
 * with probability proportional to its degree, each iteration either jumps
 * back to the start (probability restart_prob, traversing no edge) or moves
 * to a uniform random neighbor, and the sample is the subgraph of all edges
 * traversed at least once, node ids densified in ascending original order.
 * Every sample is connected, contains the start node, and inherits labels
 * unchanged. Samples draw from independent seeded streams, so the result is
 * reproducible and independent of the thread count.
 */
std::vector<LabeledGraph> rwr_sample(const LabeledGraph& g, const RwrConfig& cfg);

}  // namespace graphgen
