#pragma once

#include <optional>
#include <string>
#include <vector>

#include "graphgen/dfs_code.hpp"
#include "graphgen/graph.hpp"

namespace graphgen {

/**
 * Fixed vocabulary shared by every sequence of one dataset.
 *
 * A code tuple is represented as five categorical components
 * (t_u, t_v, L_u, L_e, L_v) drawn from three vocabularies: timestamps
 * (dim_t = max node count + 1), node labels (dim_node = distinct labels + 1)
 * and edge labels (dim_edge = distinct labels + 1). The last index of each
 * vocabulary is its end-of-sequence symbol. Labels are indexed in sorted
 * order. The concatenated one-hot width is k().
 */
struct VocabSpec {
    int dim_t = 0;
    std::vector<std::string> node_labels;
    std::vector<std::string> edge_labels;

    int dim_node() const { return static_cast<int>(node_labels.size()) + 1; }
    int dim_edge() const { return static_cast<int>(edge_labels.size()) + 1; }
    int k() const { return 2 * dim_t + 2 * dim_node() + dim_edge(); }

    int time_eos() const { return dim_t - 1; }
    int node_eos() const { return dim_node() - 1; }
    int edge_eos() const { return dim_edge() - 1; }

    // Offsets of the five component blocks inside the concatenated vector,
    // in tuple order (t_u, t_v, L_u, L_e, L_v).
    int offset(int component) const;

    // Throw std::out_of_range for labels outside the vocabulary.
    int node_index(const std::string& label) const;
    int edge_index(const std::string& label) const;

    bool operator==(const VocabSpec&) const = default;
};

// Sizes the vocabulary to a dataset: dim_t from the largest graph, label
// tables from the union of labels. Throws std::invalid_argument on an empty
// dataset.
VocabSpec build_vocab(const std::vector<LabeledGraph>& dataset);

// One sequence step as five vocabulary indices.
struct EncodedStep {
    int t_u = 0;
    int t_v = 0;
    int l_u = 0;
    int l_e = 0;
    int l_v = 0;

    bool operator==(const EncodedStep&) const = default;
};

struct EncodedSequence {
    std::vector<EncodedStep> steps;
};

// All-EOS terminator step for a vocabulary.
EncodedStep eos_step(const VocabSpec& vocab);

// True when any component carries its end-of-sequence index.
bool is_eos(const EncodedStep& step, const VocabSpec& vocab);

/**
 * Encodes a code as indices, one step per tuple plus a trailing all-EOS
 * step. Timestamps must fit below the EOS index and labels must be in
 * vocabulary; violations throw std::out_of_range.
 */
EncodedSequence encode_sequence(const DfsCode& code, const VocabSpec& vocab);

/**
 * Index step back to a code tuple. Returns nullopt when the step signals
 * end-of-sequence (any component at its EOS index); throws
 * std::out_of_range when an index lies outside its vocabulary block.
 */
std::optional<EdgeTuple> decode_step(const EncodedStep& step, const VocabSpec& vocab);

// Dense concatenated one-hot view of a step (size k(), five ones).
std::vector<double> step_onehot(const EncodedStep& step, const VocabSpec& vocab);

}  // namespace graphgen
