#pragma once

#include <string>
#include <utility>
#include <vector>

namespace graphgen {

struct Edge {
    int u = 0;
    int v = 0;
    std::string label;
};

/**
 * Undirected graph with string labels on nodes and edges.
 *
 * Node ids are dense 0..node_count()-1. Edges are stored in insertion order;
 * adjacency lists are maintained incrementally and hold (neighbor, edge index)
 * pairs. Self-loops and edges with out-of-range endpoints are kept in the edge
 * list so validate_graph can report them, but they never enter the adjacency
 * structure.
 */
class LabeledGraph {
public:
    int add_node(std::string label) {
        node_labels_.push_back(std::move(label));
        adjacency_.emplace_back();
        return static_cast<int>(node_labels_.size()) - 1;
    }

    void add_edge(int u, int v, std::string label) {
        int index = static_cast<int>(edges_.size());
        edges_.push_back({u, v, std::move(label)});
        if (u == v || !has_node(u) || !has_node(v)) return;
        adjacency_[u].emplace_back(v, index);
        adjacency_[v].emplace_back(u, index);
    }

    int node_count() const { return static_cast<int>(node_labels_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    bool has_node(int v) const { return v >= 0 && v < node_count(); }

    const std::string& node_label(int v) const { return node_labels_[v]; }
    const std::vector<std::string>& node_labels() const { return node_labels_; }
    const Edge& edge(int e) const { return edges_[e]; }
    const std::vector<Edge>& edges() const { return edges_; }

    // (neighbor node, edge index) pairs in edge insertion order.
    const std::vector<std::pair<int, int>>& neighbors(int v) const { return adjacency_[v]; }

    int degree(int v) const { return static_cast<int>(adjacency_[v].size()); }

    bool has_edge(int u, int v) const {
        if (!has_node(u) || !has_node(v)) return false;
        const auto& shorter = degree(u) <= degree(v) ? adjacency_[u] : adjacency_[v];
        int other = degree(u) <= degree(v) ? v : u;
        for (const auto& [w, e] : shorter) {
            if (w == other) return true;
        }
        return false;
    }

    // Label of the first u-v edge, or nullptr when absent.
    const std::string* edge_label_between(int u, int v) const {
        if (!has_node(u) || !has_node(v)) return nullptr;
        for (const auto& [w, e] : adjacency_[u]) {
            if (w == v) return &edges_[e].label;
        }
        return nullptr;
    }

private:
    std::vector<std::string> node_labels_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::pair<int, int>>> adjacency_;
};

struct Violation {
    enum class Kind { SelfLoop, ParallelEdge, DanglingEndpoint, Disconnected, EmptyGraph };
    Kind kind;
    std::string detail;
};

struct ValidationResult {
    bool ok = true;
    std::vector<Violation> violations;
};

// Checks the model-domain invariants: simple (no self-loops, no parallel
// edges), all endpoints in range, and connected. Every violation is reported,
// not just the first.
ValidationResult validate_graph(const LabeledGraph& g);

// Largest connected component (ties broken by smallest contained node id),
// with node ids densified in ascending order of the original ids. Self-loops
// and parallel edges are dropped; among parallel edges the first one wins.
LabeledGraph max_connected_component(const LabeledGraph& g);

// Fraction of connected neighbor pairs; 0.0 for degree < 2.
double clustering_coefficient(const LabeledGraph& g, int v);

// Structural-invariant label augmentation. Selected invariants are prepended
// to each node label in fixed order [degree, clustering coefficient], joined
// with ", ". The clustering coefficient is rendered with a fixed number of
// decimals so equal values collide to equal strings.
struct InvariantSpec {
    bool use_degree = false;
    bool use_clustering = false;
    int clustering_decimals = 2;

    bool any() const { return use_degree || use_clustering; }
};

LabeledGraph augment_labels(const LabeledGraph& g, const InvariantSpec& spec);

// Relabels nodes: node i of the result is node perm[i] of g. Test utility.
LabeledGraph permute_nodes(const LabeledGraph& g, const std::vector<int>& perm);

}  // namespace graphgen
