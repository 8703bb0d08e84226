#include "graphgen/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

namespace graphgen {

ValidationResult validate_graph(const LabeledGraph& g) {
    ValidationResult result;
    auto report = [&result](Violation::Kind kind, std::string detail) {
        result.ok = false;
        result.violations.push_back({kind, std::move(detail)});
    };

    if (g.node_count() == 0) {
        report(Violation::Kind::EmptyGraph, "graph has no nodes");
        return result;
    }

    std::map<std::pair<int, int>, int> seen;
    for (int e = 0; e < g.edge_count(); ++e) {
        const Edge& edge = g.edge(e);
        char buf[128];
        if (!g.has_node(edge.u) || !g.has_node(edge.v)) {
            std::snprintf(buf, sizeof(buf), "edge %d (%d,%d) references a missing node", e,
                          edge.u, edge.v);
            report(Violation::Kind::DanglingEndpoint, buf);
            continue;
        }
        if (edge.u == edge.v) {
            std::snprintf(buf, sizeof(buf), "edge %d is a self-loop at node %d", e, edge.u);
            report(Violation::Kind::SelfLoop, buf);
            continue;
        }
        auto key = std::minmax(edge.u, edge.v);
        auto [it, inserted] = seen.emplace(key, e);
        if (!inserted) {
            std::snprintf(buf, sizeof(buf), "edge %d duplicates edge %d (%d,%d)", e, it->second,
                          key.first, key.second);
            report(Violation::Kind::ParallelEdge, buf);
        }
    }

    // Connectivity over the adjacency structure (well-formed edges only).
    std::vector<char> visited(g.node_count(), 0);
    std::vector<int> stack = {0};
    visited[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (const auto& [w, e] : g.neighbors(v)) {
            if (!visited[w]) {
                visited[w] = 1;
                ++reached;
                stack.push_back(w);
            }
        }
    }
    if (reached != g.node_count()) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "graph is disconnected: %d of %d nodes reachable from node 0",
                      reached, g.node_count());
        report(Violation::Kind::Disconnected, buf);
    }

    return result;
}

LabeledGraph max_connected_component(const LabeledGraph& g) {
    if (g.node_count() == 0) return {};

    std::vector<int> component(g.node_count(), -1);
    std::vector<std::vector<int>> members;
    for (int start = 0; start < g.node_count(); ++start) {
        if (component[start] >= 0) continue;
        int id = static_cast<int>(members.size());
        members.emplace_back();
        std::vector<int> stack = {start};
        component[start] = id;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            members[id].push_back(v);
            for (const auto& [w, e] : g.neighbors(v)) {
                if (component[w] < 0) {
                    component[w] = id;
                    stack.push_back(w);
                }
            }
        }
    }

    // Components are discovered in ascending order of their smallest node id,
    // so the first largest one wins the tie.
    int best = 0;
    for (int id = 1; id < static_cast<int>(members.size()); ++id) {
        if (members[id].size() > members[best].size()) best = id;
    }

    std::vector<int> keep = members[best];
    std::sort(keep.begin(), keep.end());

    std::vector<int> dense(g.node_count(), -1);
    LabeledGraph out;
    for (int v : keep) dense[v] = out.add_node(g.node_label(v));

    std::map<std::pair<int, int>, bool> added;
    for (const Edge& edge : g.edges()) {
        if (!g.has_node(edge.u) || !g.has_node(edge.v)) continue;
        if (edge.u == edge.v) continue;
        if (component[edge.u] != best || component[edge.v] != best) continue;
        auto key = std::minmax(edge.u, edge.v);
        if (added.emplace(key, true).second) {
            out.add_edge(dense[edge.u], dense[edge.v], edge.label);
        }
    }
    return out;
}

double clustering_coefficient(const LabeledGraph& g, int v) {
    int deg = g.degree(v);
    if (deg < 2) return 0.0;
    const auto& nbrs = g.neighbors(v);
    int closed = 0;
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
        for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
            if (g.has_edge(nbrs[i].first, nbrs[j].first)) ++closed;
        }
    }
    return 2.0 * closed / (static_cast<double>(deg) * (deg - 1));
}

LabeledGraph augment_labels(const LabeledGraph& g, const InvariantSpec& spec) {
    LabeledGraph out;
    for (int v = 0; v < g.node_count(); ++v) {
        std::string label;
        if (spec.use_degree) {
            label += std::to_string(g.degree(v));
            label += ", ";
        }
        if (spec.use_clustering) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.*f", spec.clustering_decimals,
                          clustering_coefficient(g, v));
            label += buf;
            label += ", ";
        }
        label += g.node_label(v);
        out.add_node(std::move(label));
    }
    for (const Edge& edge : g.edges()) out.add_edge(edge.u, edge.v, edge.label);
    return out;
}

LabeledGraph permute_nodes(const LabeledGraph& g, const std::vector<int>& perm) {
    if (static_cast<int>(perm.size()) != g.node_count()) {
        throw std::invalid_argument("permute_nodes: permutation size mismatch");
    }
    std::vector<int> inverse(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) inverse[perm[i]] = static_cast<int>(i);

    LabeledGraph out;
    for (std::size_t i = 0; i < perm.size(); ++i) out.add_node(g.node_label(perm[i]));
    for (const Edge& edge : g.edges()) {
        out.add_edge(inverse[edge.u], inverse[edge.v], edge.label);
    }
    return out;
}

}  // namespace graphgen
