#pragma once

#include <cstdint>

#include "graphgen/graph.hpp"

namespace graphgen {

struct MatchOptions {
    // Upper bound on candidate-pair expansions before the search gives up.
    std::uint64_t max_expansions = 10'000'000;
};

enum class MatchOutcome { Found, NotFound, BudgetExceeded };

/**
 * Label-preserving non-induced subgraph monomorphism test (VF2 style).
 *
 * Searches for an injective node mapping of pattern into target that
 * preserves node labels and maps every pattern edge onto a target edge with
 * the same label. Extra target edges between mapped nodes are allowed.
 * Intended for simple graphs; parallel target edges are matched by their
 * first occurrence.
 */
MatchOutcome subgraph_match(const LabeledGraph& pattern, const LabeledGraph& target,
                            const MatchOptions& options = {});

// Convenience wrapper treating an exhausted budget as "not contained".
bool subgraph_isomorphic(const LabeledGraph& pattern, const LabeledGraph& target,
                         const MatchOptions& options = {});

// Exact isomorphism on simple graphs: equal node/edge/label counts plus an
// embedding in one direction pin the graphs down completely.
bool is_isomorphic(const LabeledGraph& a, const LabeledGraph& b,
                   const MatchOptions& options = {});

}  // namespace graphgen
