#include "graphgen/isomorphism.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace graphgen {
namespace {

std::map<std::string, int> label_counts(const std::vector<std::string>& labels) {
    std::map<std::string, int> counts;
    for (const auto& l : labels) ++counts[l];
    return counts;
}

std::map<std::string, int> edge_label_counts(const LabeledGraph& g) {
    std::map<std::string, int> counts;
    for (const Edge& e : g.edges()) ++counts[e.label];
    return counts;
}

// true when every multiset entry of `a` fits inside `b`
bool contained(const std::map<std::string, int>& a, const std::map<std::string, int>& b) {
    for (const auto& [key, count] : a) {
        auto it = b.find(key);
        if (it == b.end() || it->second < count) return false;
    }
    return true;
}

class Vf2Search {
public:
    Vf2Search(const LabeledGraph& pattern, const LabeledGraph& target,
              const MatchOptions& options)
        : pattern_(pattern), target_(target), options_(options) {}

    MatchOutcome run() {
        const int np = pattern_.node_count();
        if (np == 0) return MatchOutcome::Found;

        build_order();
        core_p_.assign(np, -1);
        core_t_.assign(target_.node_count(), -1);
        expansions_ = 0;
        return extend(0);
    }

private:
    // Static variable order: rarest target label first, then by connectivity
    // to the part already ordered, so the search stays anchored.
    void build_order() {
        const int np = pattern_.node_count();
        std::map<std::string, int> target_label_freq = label_counts(target_.node_labels());

        auto rarity = [&](int v) {
            auto it = target_label_freq.find(pattern_.node_label(v));
            int freq = it == target_label_freq.end() ? 0 : it->second;
            return std::pair<int, int>(freq, -pattern_.degree(v));
        };

        std::vector<char> placed(np, 0);
        std::vector<int> attached(np, 0);
        order_.clear();
        order_.reserve(np);
        for (int step = 0; step < np; ++step) {
            int best = -1;
            for (int v = 0; v < np; ++v) {
                if (placed[v]) continue;
                if (best < 0) {
                    best = v;
                    continue;
                }
                auto lhs = std::tuple(-attached[v], rarity(v).first, rarity(v).second, v);
                auto rhs = std::tuple(-attached[best], rarity(best).first, rarity(best).second, best);
                if (lhs < rhs) best = v;
            }
            placed[best] = 1;
            order_.push_back(best);
            for (const auto& [w, e] : pattern_.neighbors(best)) {
                if (!placed[w]) ++attached[w];
            }
        }
    }

    MatchOutcome extend(int depth) {
        if (depth == pattern_.node_count()) return MatchOutcome::Found;

        const int p = order_[depth];

        // Prefer extending from an already-mapped neighbor: candidates are
        // then restricted to that node's image neighborhood.
        int anchor = -1;
        for (const auto& [w, e] : pattern_.neighbors(p)) {
            if (core_p_[w] >= 0) {
                if (anchor < 0 || target_.degree(core_p_[anchor]) > target_.degree(core_p_[w])) {
                    anchor = w;
                }
            }
        }

        if (anchor >= 0) {
            for (const auto& [t, e] : target_.neighbors(core_p_[anchor])) {
                MatchOutcome out = try_pair(depth, p, t);
                if (out != MatchOutcome::NotFound) return out;
            }
        } else {
            for (int t = 0; t < target_.node_count(); ++t) {
                MatchOutcome out = try_pair(depth, p, t);
                if (out != MatchOutcome::NotFound) return out;
            }
        }
        return MatchOutcome::NotFound;
    }

    MatchOutcome try_pair(int depth, int p, int t) {
        if (++expansions_ > options_.max_expansions) return MatchOutcome::BudgetExceeded;
        if (core_t_[t] >= 0) return MatchOutcome::NotFound;
        if (pattern_.node_label(p) != target_.node_label(t)) return MatchOutcome::NotFound;
        if (pattern_.degree(p) > target_.degree(t)) return MatchOutcome::NotFound;

        for (const auto& [w, e] : pattern_.neighbors(p)) {
            if (core_p_[w] < 0) continue;
            const std::string* tl = target_.edge_label_between(t, core_p_[w]);
            if (tl == nullptr || *tl != pattern_.edge(e).label) return MatchOutcome::NotFound;
        }

        core_p_[p] = t;
        core_t_[t] = p;
        MatchOutcome out = extend(depth + 1);
        if (out == MatchOutcome::NotFound) {
            core_p_[p] = -1;
            core_t_[t] = -1;
        }
        return out;
    }

    const LabeledGraph& pattern_;
    const LabeledGraph& target_;
    const MatchOptions& options_;
    std::vector<int> order_;
    std::vector<int> core_p_;
    std::vector<int> core_t_;
    std::uint64_t expansions_ = 0;
};

}  // namespace

MatchOutcome subgraph_match(const LabeledGraph& pattern, const LabeledGraph& target,
                            const MatchOptions& options) {
    if (pattern.node_count() > target.node_count()) return MatchOutcome::NotFound;
    if (pattern.edge_count() > target.edge_count()) return MatchOutcome::NotFound;
    if (!contained(label_counts(pattern.node_labels()), label_counts(target.node_labels()))) {
        return MatchOutcome::NotFound;
    }
    if (!contained(edge_label_counts(pattern), edge_label_counts(target))) {
        return MatchOutcome::NotFound;
    }
    return Vf2Search(pattern, target, options).run();
}

bool subgraph_isomorphic(const LabeledGraph& pattern, const LabeledGraph& target,
                         const MatchOptions& options) {
    return subgraph_match(pattern, target, options) == MatchOutcome::Found;
}

bool is_isomorphic(const LabeledGraph& a, const LabeledGraph& b, const MatchOptions& options) {
    if (a.node_count() != b.node_count() || a.edge_count() != b.edge_count()) return false;
    if (label_counts(a.node_labels()) != label_counts(b.node_labels())) return false;
    if (edge_label_counts(a) != edge_label_counts(b)) return false;

    std::vector<int> da, db;
    for (int v = 0; v < a.node_count(); ++v) da.push_back(a.degree(v));
    for (int v = 0; v < b.node_count(); ++v) db.push_back(b.degree(v));
    std::sort(da.begin(), da.end());
    std::sort(db.begin(), db.end());
    if (da != db) return false;

    // Same node and edge counts make any label-preserving embedding a
    // bijection that uses every edge, i.e. an isomorphism.
    return subgraph_match(a, b, options) == MatchOutcome::Found;
}

}  // namespace graphgen
