#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "graphgen/graph.hpp"

namespace graphgen {

/**
 * One edge of a DFS code. Timestamps are discovery times of the traversal
 * that produced the code: time_u < time_v marks a forward (tree) edge,
 * time_u > time_v a backward edge to an ancestor.
 */
struct EdgeTuple {
    int time_u = 0;
    int time_v = 0;
    std::string label_u;
    std::string label_e;
    std::string label_v;

    bool is_forward() const { return time_u < time_v; }
    bool operator==(const EdgeTuple&) const = default;
};

enum class Ordering { Less, Equal, Greater };

/**
 * Total order on code tuples.
 *
 * Backward edges sort before forward edges that discover later vertices.
 * Between two backward edges the source decides, then the smaller target
 * timestamp; between two forward edges the smaller target decides, then the
 * larger source (the deeper origin extends the traversal, so it comes
 * first). Structural ties fall through to (label_u, label_e, label_v).
 */
Ordering compare_tuples(const EdgeTuple& a, const EdgeTuple& b);

struct DfsCode {
    std::vector<EdgeTuple> tuples;

    std::size_t size() const { return tuples.size(); }
    bool empty() const { return tuples.empty(); }
    bool operator==(const DfsCode&) const = default;
};

// Lexicographic extension of compare_tuples; a proper prefix sorts first.
Ordering compare_codes(const DfsCode& a, const DfsCode& b);

/**
 * A partial DFS traversal during canonization.
 *
 * node_of_time maps timestamps to graph nodes in discovery order,
 * time_of_node is its inverse (-1 when undiscovered), rightmost_path holds
 * the timestamps of the active root-to-rightmost path, edge_used flags the
 * edges already emitted into `code`.
 */
struct SearchState {
    std::vector<int> node_of_time;
    std::vector<int> time_of_node;
    std::vector<int> rightmost_path;
    std::vector<char> edge_used;
    DfsCode code;

    bool complete(const LabeledGraph& g) const {
        return code.size() == static_cast<std::size_t>(g.edge_count());
    }
};

/**
 * All one-tuple continuations of a partial traversal that can still reach a
 * complete code of g.
 *
 * When the rightmost vertex has unemitted edges to already-discovered
 * vertices, the continuation is forced: the single backward tuple with the
 * smallest target timestamp. Otherwise the traversal descends from the
 * deepest vertex on the rightmost path that still owns unemitted edges
 * (vertices below it are exhausted and may be popped), branching over its
 * undiscovered neighbors.
 */
std::vector<std::pair<EdgeTuple, SearchState>> valid_extensions(const SearchState& state,
                                                                const LabeledGraph& g);

struct CanonizeStats {
    // successor states materialized during the search
    std::uint64_t expansions = 0;
    std::size_t peak_frontier = 0;
};

struct CanonizeOptions {
    std::size_t frontier_cap = 1'000'000;
};

/**
 * Minimum DFS code of a connected simple labeled graph.
 *
 * Branch-and-bound over a frontier of partial traversals that all share the
 * current lexicographically minimal code prefix: each round computes the
 * minimal extension tuple across the frontier and keeps exactly the
 * successors achieving it. The result is invariant under node order, so it
 * serves as a canonical label: two graphs are isomorphic iff their minimum
 * codes are equal.
 *
 * Throws std::invalid_argument for graphs outside the domain (empty,
 * disconnected, self-loops, parallel edges) and std::runtime_error when the
 * frontier exceeds options.frontier_cap. A single-node graph has no edges to
 * emit and canonizes to the empty code.
 */
DfsCode min_dfs_code(const LabeledGraph& g, const CanonizeOptions& options = {},
                     CanonizeStats* stats = nullptr);

struct BruteForceStats {
    std::uint64_t states_visited = 0;
};

/**
 * Reference implementation: enumerates every DFS traversal of g from every
 * start node and returns the smallest resulting code. Exponential; refuses
 * graphs with more than node_cap nodes. Exists to test min_dfs_code against
 * and to size up how much work the frontier search avoids.
 */
DfsCode brute_force_min_dfs_code(const LabeledGraph& g, int node_cap = 8,
                                 BruteForceStats* stats = nullptr);

enum class DecodeMode {
    // Reject structural defects: bad timestamp references, label conflicts,
    // self or duplicate edges.
    Strict,
    // Repair model output: first label assigned to a timestamp wins, self and
    // duplicate edges are dropped, and the result is reduced to its largest
    // connected component.
    Lenient,
};

// Rebuilds a graph from a code. Strict mode throws std::invalid_argument on
// malformed input. decode(min_dfs_code(g), Strict) is isomorphic to g.
LabeledGraph decode(const DfsCode& code, DecodeMode mode);

// "(0,1,X,a,X) (1,2,X,a,Z)"; labels containing spaces, commas, parentheses
// or quotes are double-quoted with backslash escapes.
std::string code_to_text(const DfsCode& code);

/**
 * Canonizes a batch of graphs, one independent search per graph, fanned out
 * over OpenMP when threads != 1. threads <= 0 uses all hardware threads;
 * threads == 1 runs the serial reference loop. Per-graph stats land in
 * `stats` when given (resized to match).
 */
std::vector<DfsCode> canonize_all(const std::vector<LabeledGraph>& graphs, int threads,
                                  const CanonizeOptions& options = {},
                                  std::vector<CanonizeStats>* stats = nullptr);

}  // namespace graphgen
