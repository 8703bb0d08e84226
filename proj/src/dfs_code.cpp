#include "graphgen/dfs_code.hpp"

#include <algorithm>
#include <climits>
#include <set>
#include <stdexcept>
#include <utility>

#include "graphgen/parallel.hpp"

namespace graphgen {

namespace {

Ordering order_of(int cmp) {
    if (cmp < 0) return Ordering::Less;
    if (cmp > 0) return Ordering::Greater;
    return Ordering::Equal;
}

Ordering compare_labels(const EdgeTuple& a, const EdgeTuple& b) {
    if (int c = a.label_u.compare(b.label_u)) return order_of(c);
    if (int c = a.label_e.compare(b.label_e)) return order_of(c);
    if (int c = a.label_v.compare(b.label_v)) return order_of(c);
    return Ordering::Equal;
}

}  // namespace

Ordering compare_tuples(const EdgeTuple& a, const EdgeTuple& b) {
    const bool a_fwd = a.is_forward();
    const bool b_fwd = b.is_forward();
    if (!a_fwd && b_fwd) return a.time_u < b.time_v ? Ordering::Less : Ordering::Greater;
    if (a_fwd && !b_fwd) return a.time_v <= b.time_u ? Ordering::Less : Ordering::Greater;
    if (!a_fwd) {
        if (a.time_u != b.time_u) return order_of(a.time_u - b.time_u);
        if (a.time_v != b.time_v) return order_of(a.time_v - b.time_v);
    } else {
        if (a.time_v != b.time_v) return order_of(a.time_v - b.time_v);
        if (a.time_u != b.time_u) return order_of(b.time_u - a.time_u);
    }
    return compare_labels(a, b);
}

Ordering compare_codes(const DfsCode& a, const DfsCode& b) {
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        Ordering o = compare_tuples(a.tuples[i], b.tuples[i]);
        if (o != Ordering::Equal) return o;
    }
    if (a.size() != b.size()) return a.size() < b.size() ? Ordering::Less : Ordering::Greater;
    return Ordering::Equal;
}

namespace {

// Unemitted edge from the rightmost vertex to the earliest-discovered
// neighbor, or -1. Such an edge forces the next tuple of every completion.
int forced_backward_edge(const SearchState& s, const LabeledGraph& g) {
    int r = s.node_of_time[s.rightmost_path.back()];
    int best_edge = -1;
    int best_time = INT_MAX;
    for (const auto& [w, e] : g.neighbors(r)) {
        if (s.edge_used[e]) continue;
        int tw = s.time_of_node[w];
        if (tw >= 0 && tw < best_time) {
            best_time = tw;
            best_edge = e;
        }
    }
    return best_edge;
}

}  // namespace

std::vector<std::pair<EdgeTuple, SearchState>> valid_extensions(const SearchState& state,
                                                                const LabeledGraph& g) {
    std::vector<std::pair<EdgeTuple, SearchState>> out;
    if (state.complete(g) || state.rightmost_path.empty()) return out;

    int back = forced_backward_edge(state, g);
    if (back >= 0) {
        int r_time = state.rightmost_path.back();
        int r = state.node_of_time[r_time];
        const Edge& edge = g.edge(back);
        int w = edge.u == r ? edge.v : edge.u;
        EdgeTuple tuple{r_time, state.time_of_node[w], g.node_label(r), edge.label,
                        g.node_label(w)};
        SearchState next = state;
        next.edge_used[back] = 1;
        next.code.tuples.push_back(tuple);
        out.emplace_back(std::move(tuple), std::move(next));
        return out;
    }

    // Descend from the deepest rightmost-path vertex that still owns
    // unemitted edges; everything below it is exhausted and gets popped.
    // Bypassing a vertex that still has work would strand those edges, so
    // shallower vertices contribute nothing.
    for (int depth = static_cast<int>(state.rightmost_path.size()) - 1; depth >= 0; --depth) {
        int v_time = state.rightmost_path[depth];
        int v = state.node_of_time[v_time];
        bool has_work = false;
        for (const auto& [w, e] : g.neighbors(v)) {
            if (state.edge_used[e]) continue;
            has_work = true;
            if (state.time_of_node[w] >= 0) continue;
            int new_time = static_cast<int>(state.node_of_time.size());
            EdgeTuple tuple{v_time, new_time, g.node_label(v), g.edge(e).label, g.node_label(w)};
            SearchState next = state;
            next.node_of_time.push_back(w);
            next.time_of_node[w] = new_time;
            next.rightmost_path.resize(depth + 1);
            next.rightmost_path.push_back(new_time);
            next.edge_used[e] = 1;
            next.code.tuples.push_back(tuple);
            out.emplace_back(std::move(tuple), std::move(next));
        }
        if (has_work) break;
    }
    return out;
}

DfsCode min_dfs_code(const LabeledGraph& g, const CanonizeOptions& options, CanonizeStats* stats) {
    CanonizeStats local;
    ValidationResult vr = validate_graph(g);
    if (!vr.ok) {
        throw std::invalid_argument("min_dfs_code: " + vr.violations.front().detail);
    }
    if (g.node_count() == 1) {
        if (stats) *stats = local;
        return {};
    }

    // Seed: every orientation of every edge whose label triple is globally
    // minimal becomes a start state mapping its endpoints to times 0 and 1.
    const EdgeTuple* best_seed = nullptr;
    EdgeTuple best_tuple;
    std::vector<SearchState> frontier;
    auto consider_seed = [&](int a, int b, int e) {
        EdgeTuple tuple{0, 1, g.node_label(a), g.edge(e).label, g.node_label(b)};
        if (best_seed != nullptr) {
            Ordering o = compare_labels(tuple, best_tuple);
            if (o == Ordering::Greater) return;
            if (o == Ordering::Less) frontier.clear();
        }
        best_tuple = tuple;
        best_seed = &best_tuple;

        SearchState s;
        s.node_of_time = {a, b};
        s.time_of_node.assign(g.node_count(), -1);
        s.time_of_node[a] = 0;
        s.time_of_node[b] = 1;
        s.rightmost_path = {0, 1};
        s.edge_used.assign(g.edge_count(), 0);
        s.edge_used[e] = 1;
        s.code.tuples.push_back(tuple);
        frontier.push_back(std::move(s));
        ++local.expansions;
    };
    for (int e = 0; e < g.edge_count(); ++e) {
        consider_seed(g.edge(e).u, g.edge(e).v, e);
        consider_seed(g.edge(e).v, g.edge(e).u, e);
    }
    if (frontier.size() > options.frontier_cap) {
        throw std::runtime_error("min_dfs_code: frontier exceeded cap of " +
                                 std::to_string(options.frontier_cap) + " states");
    }
    local.peak_frontier = frontier.size();

    while (!frontier.front().complete(g)) {
        bool have_best = false;
        EdgeTuple best;
        std::vector<SearchState> next_frontier;
        for (const SearchState& state : frontier) {
            for (auto& [tuple, successor] : valid_extensions(state, g)) {
                ++local.expansions;
                if (!have_best) {
                    have_best = true;
                    best = tuple;
                    next_frontier.push_back(std::move(successor));
                    continue;
                }
                Ordering o = compare_tuples(tuple, best);
                if (o == Ordering::Less) {
                    best = tuple;
                    next_frontier.clear();
                    next_frontier.push_back(std::move(successor));
                } else if (o == Ordering::Equal) {
                    next_frontier.push_back(std::move(successor));
                    if (next_frontier.size() > options.frontier_cap) {
                        throw std::runtime_error(
                            "min_dfs_code: frontier exceeded cap of " +
                            std::to_string(options.frontier_cap) + " states");
                    }
                }
            }
        }
        if (next_frontier.empty()) {
            throw std::runtime_error("min_dfs_code: internal error: no valid extension");
        }
        frontier = std::move(next_frontier);
        local.peak_frontier = std::max(local.peak_frontier, frontier.size());
    }

    if (stats) *stats = local;
    return frontier.front().code;
}

namespace {

class BruteForceSearch {
public:
    BruteForceSearch(const LabeledGraph& g, BruteForceStats& stats) : g_(g), stats_(stats) {}

    DfsCode run() {
        time_of_node_.assign(g_.node_count(), -1);
        edge_used_.assign(g_.edge_count(), 0);
        for (int s = 0; s < g_.node_count(); ++s) {
            time_of_node_[s] = 0;
            next_time_ = 1;
            path_ = {s};
            recurse();
            path_.clear();
            time_of_node_[s] = -1;
        }
        return best_;
    }

private:
    void recurse() {
        ++stats_.states_visited;
        if (code_.size() == static_cast<std::size_t>(g_.edge_count())) {
            if (!have_best_ || compare_codes(code_, best_) == Ordering::Less) {
                best_ = code_;
                have_best_ = true;
            }
            return;
        }

        // Pop vertices whose incident edges are all emitted; a DFS only
        // retreats past a vertex once it is exhausted.
        std::vector<int> popped;
        while (!path_.empty() && exhausted(path_.back())) {
            popped.push_back(path_.back());
            path_.pop_back();
        }
        if (!path_.empty()) {
            int v = path_.back();
            for (const auto& [w, e] : g_.neighbors(v)) {
                if (edge_used_[e] || time_of_node_[w] >= 0) continue;
                descend(v, e, w);
            }
        }
        while (!popped.empty()) {
            path_.push_back(popped.back());
            popped.pop_back();
        }
    }

    // Applies one forward step plus the forced backward emissions of the new
    // vertex, recurses, and undoes everything.
    void descend(int v, int via_edge, int w) {
        std::size_t code_mark = code_.size();
        int t_w = next_time_++;
        time_of_node_[w] = t_w;
        edge_used_[via_edge] = 1;
        path_.push_back(w);
        code_.tuples.push_back({time_of_node_[v], t_w, g_.node_label(v), g_.edge(via_edge).label,
                                g_.node_label(w)});

        // Every edge from the new vertex to an already-discovered one must be
        // emitted now, earliest-discovered target first.
        std::vector<std::pair<int, int>> backs;
        for (const auto& [x, e] : g_.neighbors(w)) {
            if (!edge_used_[e] && time_of_node_[x] >= 0) backs.emplace_back(time_of_node_[x], e);
        }
        std::sort(backs.begin(), backs.end());
        for (const auto& [tx, e] : backs) {
            const Edge& edge = g_.edge(e);
            int x = edge.u == w ? edge.v : edge.u;
            edge_used_[e] = 1;
            code_.tuples.push_back({t_w, tx, g_.node_label(w), edge.label, g_.node_label(x)});
        }

        recurse();

        for (const auto& [tx, e] : backs) edge_used_[e] = 0;
        code_.tuples.resize(code_mark);
        path_.pop_back();
        edge_used_[via_edge] = 0;
        time_of_node_[w] = -1;
        --next_time_;
    }

    bool exhausted(int v) const {
        for (const auto& [w, e] : g_.neighbors(v)) {
            if (!edge_used_[e]) return false;
        }
        return true;
    }

    const LabeledGraph& g_;
    BruteForceStats& stats_;
    std::vector<int> time_of_node_;
    std::vector<char> edge_used_;
    std::vector<int> path_;
    int next_time_ = 0;
    DfsCode code_;
    DfsCode best_;
    bool have_best_ = false;
};

}  // namespace

DfsCode brute_force_min_dfs_code(const LabeledGraph& g, int node_cap, BruteForceStats* stats) {
    if (g.node_count() > node_cap) {
        throw std::invalid_argument("brute_force_min_dfs_code: graph exceeds node cap of " +
                                    std::to_string(node_cap));
    }
    ValidationResult vr = validate_graph(g);
    if (!vr.ok) {
        throw std::invalid_argument("brute_force_min_dfs_code: " + vr.violations.front().detail);
    }
    BruteForceStats local;
    DfsCode result;
    if (g.node_count() > 1) {
        result = BruteForceSearch(g, local).run();
    }
    if (stats) *stats = local;
    return result;
}

namespace {

LabeledGraph decode_strict(const DfsCode& code) {
    LabeledGraph g;
    for (std::size_t i = 0; i < code.size(); ++i) {
        const EdgeTuple& t = code.tuples[i];
        auto fail = [&](const std::string& why) {
            throw std::invalid_argument("decode: tuple " + std::to_string(i) + ": " + why);
        };
        if (t.time_u == t.time_v) fail("self edge");
        if (t.is_forward()) {
            if (g.node_count() == 0) {
                if (t.time_u != 0 || t.time_v != 1) fail("first tuple must be (0,1,...)");
                g.add_node(t.label_u);
                g.add_node(t.label_v);
            } else {
                if (t.time_u < 0 || t.time_u >= g.node_count()) fail("unknown source timestamp");
                if (t.time_v != g.node_count()) fail("forward target is not the next timestamp");
                if (g.node_label(t.time_u) != t.label_u) fail("source label conflict");
                g.add_node(t.label_v);
            }
            g.add_edge(t.time_u, t.time_v, t.label_e);
        } else {
            if (t.time_v < 0 || t.time_u >= g.node_count()) fail("timestamp out of range");
            if (g.node_label(t.time_u) != t.label_u) fail("source label conflict");
            if (g.node_label(t.time_v) != t.label_v) fail("target label conflict");
            if (g.has_edge(t.time_u, t.time_v)) fail("duplicate edge");
            g.add_edge(t.time_u, t.time_v, t.label_e);
        }
    }
    return g;
}

LabeledGraph decode_lenient(const DfsCode& code) {
    std::vector<std::string> labels;
    std::set<std::pair<int, int>> seen;
    std::vector<Edge> edges;
    for (const EdgeTuple& t : code.tuples) {
        if (t.time_u < 0 || t.time_v < 0) continue;
        int hi = std::max(t.time_u, t.time_v);
        if (hi >= static_cast<int>(labels.size())) labels.resize(hi + 1);
        if (labels[t.time_u].empty()) labels[t.time_u] = t.label_u;
        if (labels[t.time_v].empty()) labels[t.time_v] = t.label_v;
        if (t.time_u == t.time_v) continue;
        auto key = std::minmax(t.time_u, t.time_v);
        if (!seen.insert(key).second) continue;
        edges.push_back({t.time_u, t.time_v, t.label_e});
    }

    LabeledGraph g;
    for (const std::string& label : labels) g.add_node(label.empty() ? "?" : label);
    for (const Edge& e : edges) g.add_edge(e.u, e.v, e.label);
    return max_connected_component(g);
}

}  // namespace

LabeledGraph decode(const DfsCode& code, DecodeMode mode) {
    return mode == DecodeMode::Strict ? decode_strict(code) : decode_lenient(code);
}

namespace {

std::string quote_label(const std::string& s) {
    if (!s.empty() && s.find_first_of(" ,()\"\\") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

std::string code_to_text(const DfsCode& code) {
    std::string out;
    for (std::size_t i = 0; i < code.size(); ++i) {
        const EdgeTuple& t = code.tuples[i];
        if (i > 0) out += ' ';
        out += '(';
        out += std::to_string(t.time_u);
        out += ',';
        out += std::to_string(t.time_v);
        out += ',';
        out += quote_label(t.label_u);
        out += ',';
        out += quote_label(t.label_e);
        out += ',';
        out += quote_label(t.label_v);
        out += ')';
    }
    return out;
}

std::vector<DfsCode> canonize_all(const std::vector<LabeledGraph>& graphs, int threads,
                                  const CanonizeOptions& options,
                                  std::vector<CanonizeStats>* stats) {
    std::vector<DfsCode> codes(graphs.size());
    if (stats) stats->assign(graphs.size(), {});
    parallel_for(graphs.size(), threads, [&](std::size_t i) {
        codes[i] = min_dfs_code(graphs[i], options, stats ? &(*stats)[i] : nullptr);
    });
    return codes;
}

}  // namespace graphgen
