#include "graphgen/codec.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace graphgen {

namespace {

int sorted_index(const std::vector<std::string>& table, const std::string& label,
                 const char* what) {
    auto it = std::lower_bound(table.begin(), table.end(), label);
    if (it == table.end() || *it != label) {
        throw std::out_of_range(std::string("vocab: unknown ") + what + " label: " + label);
    }
    return static_cast<int>(it - table.begin());
}

}  // namespace

int VocabSpec::offset(int component) const {
    switch (component) {
        case 0: return 0;
        case 1: return dim_t;
        case 2: return 2 * dim_t;
        case 3: return 2 * dim_t + dim_node();
        case 4: return 2 * dim_t + dim_node() + dim_edge();
        default: throw std::out_of_range("VocabSpec::offset: component must be 0..4");
    }
}

int VocabSpec::node_index(const std::string& label) const {
    return sorted_index(node_labels, label, "node");
}

int VocabSpec::edge_index(const std::string& label) const {
    return sorted_index(edge_labels, label, "edge");
}

VocabSpec build_vocab(const std::vector<LabeledGraph>& dataset) {
    if (dataset.empty()) throw std::invalid_argument("build_vocab: empty dataset");

    int max_nodes = 0;
    std::set<std::string> node_labels;
    std::set<std::string> edge_labels;
    for (const LabeledGraph& g : dataset) {
        max_nodes = std::max(max_nodes, g.node_count());
        for (const std::string& l : g.node_labels()) node_labels.insert(l);
        for (const Edge& e : g.edges()) edge_labels.insert(e.label);
    }

    VocabSpec vocab;
    vocab.dim_t = max_nodes + 1;
    vocab.node_labels.assign(node_labels.begin(), node_labels.end());
    vocab.edge_labels.assign(edge_labels.begin(), edge_labels.end());
    return vocab;
}

EncodedStep eos_step(const VocabSpec& vocab) {
    return {vocab.time_eos(), vocab.time_eos(), vocab.node_eos(), vocab.edge_eos(),
            vocab.node_eos()};
}

bool is_eos(const EncodedStep& step, const VocabSpec& vocab) {
    return step.t_u == vocab.time_eos() || step.t_v == vocab.time_eos() ||
           step.l_u == vocab.node_eos() || step.l_e == vocab.edge_eos() ||
           step.l_v == vocab.node_eos();
}

EncodedSequence encode_sequence(const DfsCode& code, const VocabSpec& vocab) {
    EncodedSequence seq;
    seq.steps.reserve(code.size() + 1);
    for (const EdgeTuple& t : code.tuples) {
        if (t.time_u < 0 || t.time_u >= vocab.time_eos() || t.time_v < 0 ||
            t.time_v >= vocab.time_eos()) {
            throw std::out_of_range("encode_sequence: timestamp outside vocabulary");
        }
        seq.steps.push_back({t.time_u, t.time_v, vocab.node_index(t.label_u),
                             vocab.edge_index(t.label_e), vocab.node_index(t.label_v)});
    }
    seq.steps.push_back(eos_step(vocab));
    return seq;
}

std::optional<EdgeTuple> decode_step(const EncodedStep& step, const VocabSpec& vocab) {
    auto check = [](int value, int dim, const char* what) {
        if (value < 0 || value >= dim) {
            throw std::out_of_range(std::string("decode_step: ") + what + " index out of range");
        }
    };
    check(step.t_u, vocab.dim_t, "t_u");
    check(step.t_v, vocab.dim_t, "t_v");
    check(step.l_u, vocab.dim_node(), "L_u");
    check(step.l_e, vocab.dim_edge(), "L_e");
    check(step.l_v, vocab.dim_node(), "L_v");

    if (is_eos(step, vocab)) return std::nullopt;
    return EdgeTuple{step.t_u, step.t_v, vocab.node_labels[step.l_u],
                     vocab.edge_labels[step.l_e], vocab.node_labels[step.l_v]};
}

std::vector<double> step_onehot(const EncodedStep& step, const VocabSpec& vocab) {
    std::vector<double> v(vocab.k(), 0.0);
    v[vocab.offset(0) + step.t_u] = 1.0;
    v[vocab.offset(1) + step.t_v] = 1.0;
    v[vocab.offset(2) + step.l_u] = 1.0;
    v[vocab.offset(3) + step.l_e] = 1.0;
    v[vocab.offset(4) + step.l_v] = 1.0;
    return v;
}

}  // namespace graphgen
