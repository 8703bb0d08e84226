#include "graphgen/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "graphgen/parallel.hpp"
#include "graphgen/rng.hpp"

namespace graphgen {

namespace {

std::string format_parse_error(int line, const std::string& reason) {
    char prefix[48];
    std::snprintf(prefix, sizeof prefix, "parse error at line %d: ", line);
    return prefix + reason;
}

int parse_int(const std::string& token, int line, const char* what) {
    std::size_t used = 0;
    int value = 0;
    try {
        value = std::stoi(token, &used);
    } catch (const std::exception&) {
        throw ParseError(line, std::string("malformed ") + what + " '" + token + "'");
    }
    if (used != token.size())
        throw ParseError(line, std::string("malformed ") + what + " '" + token + "'");
    return value;
}

std::vector<std::string> tokenize(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> tokens;
    std::string token;
    while (in >> token) tokens.push_back(token);
    return tokens;
}

// Apply the policy to a finished graph; returns false when it is dropped.
bool admit_graph(const LabeledGraph& g, int graph_index, InvalidGraphPolicy policy) {
    ValidationResult result = validate_graph(g);
    if (result.ok) return true;
    if (policy == InvalidGraphPolicy::Skip) return false;
    char prefix[48];
    std::snprintf(prefix, sizeof prefix, "graph %d: ", graph_index);
    throw ValidationError(prefix + result.violations.front().detail);
}

void require_label(const std::string& label) {
    if (label.empty()) throw std::invalid_argument("write_dataset: empty label");
    for (char c : label)
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r')
            throw std::invalid_argument("write_dataset: label '" + label +
                                        "' contains whitespace");
}

}  // namespace

ParseError::ParseError(int line, const std::string& reason)
    : std::runtime_error(format_parse_error(line, reason)), line_(line) {}

std::vector<LabeledGraph> parse_graphs_text(const std::string& text, InvalidGraphPolicy policy) {
    std::vector<LabeledGraph> graphs;
    LabeledGraph current;
    bool in_graph = false;
    int graph_index = 0;

    auto flush = [&]() {
        if (!in_graph) return;
        if (admit_graph(current, graph_index, policy)) graphs.push_back(std::move(current));
        current = LabeledGraph{};
        ++graph_index;
    };

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::vector<std::string> tokens = tokenize(raw);
        if (tokens.empty()) continue;
        const std::string& tag = tokens.front();
        if (tag == "t") {
            if (tokens.size() != 3 || tokens[1] != "#")
                throw ParseError(line_no, "graph header must be 't # <index>'");
            parse_int(tokens[2], line_no, "graph index");
            flush();
            in_graph = true;
        } else if (tag == "v") {
            if (!in_graph) throw ParseError(line_no, "vertex line before any graph header");
            if (tokens.size() != 3)
                throw ParseError(line_no, "vertex line must be 'v <id> <label>'");
            int id = parse_int(tokens[1], line_no, "vertex id");
            if (id != current.node_count()) {
                char buf[96];
                std::snprintf(buf, sizeof buf, "vertex id %d out of order (expected %d)", id,
                              current.node_count());
                throw ParseError(line_no, buf);
            }
            current.add_node(tokens[2]);
        } else if (tag == "e") {
            if (!in_graph) throw ParseError(line_no, "edge line before any graph header");
            if (tokens.size() != 4)
                throw ParseError(line_no, "edge line must be 'e <u> <v> <label>'");
            int u = parse_int(tokens[1], line_no, "edge endpoint");
            int v = parse_int(tokens[2], line_no, "edge endpoint");
            if (!current.has_node(u) || !current.has_node(v)) {
                char buf[96];
                std::snprintf(buf, sizeof buf, "edge (%d,%d) references an undeclared vertex", u,
                              v);
                throw ParseError(line_no, buf);
            }
            current.add_edge(u, v, tokens[3]);
        } else {
            throw ParseError(line_no, "unknown line type '" + tag + "'");
        }
    }
    flush();
    return graphs;
}

std::vector<LabeledGraph> parse_dataset(const std::string& path, InvalidGraphPolicy policy) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(0, "cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_graphs_text(buffer.str(), policy);
}

std::string write_graphs_text(const std::vector<LabeledGraph>& graphs) {
    std::string out;
    char buf[64];
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        const LabeledGraph& g = graphs[i];
        std::snprintf(buf, sizeof buf, "t # %zu\n", i);
        out += buf;
        for (int v = 0; v < g.node_count(); ++v) {
            require_label(g.node_label(v));
            std::snprintf(buf, sizeof buf, "v %d ", v);
            out += buf;
            out += g.node_label(v);
            out.push_back('\n');
        }
        for (const Edge& e : g.edges()) {
            require_label(e.label);
            std::snprintf(buf, sizeof buf, "e %d %d ", e.u, e.v);
            out += buf;
            out += e.label;
            out.push_back('\n');
        }
    }
    return out;
}

void write_dataset(const std::string& path, const std::vector<LabeledGraph>& graphs) {
    std::string text = write_graphs_text(graphs);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("write_dataset: cannot open '" + path + "'");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw std::runtime_error("write_dataset: write failed for '" + path + "'");
}

DatasetSplit split_dataset(const std::vector<LabeledGraph>& graphs, const SplitRatios& ratios,
                           std::uint64_t seed) {
    if (ratios.train < 0.0 || ratios.validation < 0.0 || ratios.test < 0.0)
        throw std::invalid_argument("split_dataset: negative ratio");
    double sum = ratios.train + ratios.validation + ratios.test;
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("split_dataset: ratios must sum to 1");

    std::size_t n = graphs.size();
    auto train_count = static_cast<std::size_t>(std::llround(ratios.train * static_cast<double>(n)));
    auto valid_count =
        static_cast<std::size_t>(std::llround(ratios.validation * static_cast<double>(n)));
    if (train_count > n) train_count = n;
    if (train_count + valid_count > n) valid_count = n - train_count;
    if (train_count == 0) throw TooFewGraphs("split_dataset: train split would be empty");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    shuffle(order, rng);

    DatasetSplit split;
    split.ratios = ratios;
    split.seed = seed;
    for (std::size_t i = 0; i < n; ++i) {
        const LabeledGraph& g = graphs[order[i]];
        if (i < train_count)
            split.train.push_back(g);
        else if (i < train_count + valid_count)
            split.validation.push_back(g);
        else
            split.test.push_back(g);
    }
    return split;
}

namespace {

LabeledGraph walk_once(const LabeledGraph& g, const RwrConfig& cfg, Rng& rng,
                       std::uint64_t total_degree) {
    // Start node drawn proportionally to degree.
    int start = 0;
    std::uint64_t ticket = rng.next_below(total_degree);
    std::uint64_t cumulative = 0;
    for (int v = 0; v < g.node_count(); ++v) {
        cumulative += static_cast<std::uint64_t>(g.degree(v));
        if (ticket < cumulative) {
            start = v;
            break;
        }
    }

    std::vector<char> traversed(g.edge_count(), 0);
    int current = start;
    for (int step = 0; step < cfg.iterations; ++step) {
        if (rng.next_double() < cfg.restart_prob) {
            current = start;  // the jump itself traverses no edge
            continue;
        }
        const auto& adjacent = g.neighbors(current);
        const auto& [next, edge_index] = adjacent[rng.next_below(adjacent.size())];
        traversed[edge_index] = 1;
        current = next;
    }

    // Densify the touched nodes in ascending original order.
    std::vector<int> remap(g.node_count(), -1);
    LabeledGraph sample;
    std::vector<char> touched(g.node_count(), 0);
    touched[start] = 1;
    for (int e = 0; e < g.edge_count(); ++e)
        if (traversed[e]) {
            touched[g.edges()[e].u] = 1;
            touched[g.edges()[e].v] = 1;
        }
    for (int v = 0; v < g.node_count(); ++v)
        if (touched[v]) remap[v] = sample.add_node(g.node_label(v));
    for (int e = 0; e < g.edge_count(); ++e)
        if (traversed[e]) {
            const Edge& edge = g.edges()[e];
            sample.add_edge(remap[edge.u], remap[edge.v], edge.label);
        }
    return sample;
}

}  // namespace

std::vector<LabeledGraph> rwr_sample(const LabeledGraph& g, const RwrConfig& cfg) {
    if (cfg.restart_prob <= 0.0 || cfg.restart_prob >= 1.0)
        throw std::invalid_argument("rwr_sample: restart probability must be in (0,1)");
    if (cfg.iterations < 1) throw std::invalid_argument("rwr_sample: iterations must be >= 1");
    if (cfg.samples < 0) throw std::invalid_argument("rwr_sample: negative sample count");
    ValidationResult check = validate_graph(g);
    if (!check.ok)
        throw std::invalid_argument("rwr_sample: " + check.violations.front().detail);

    std::vector<LabeledGraph> samples(static_cast<std::size_t>(cfg.samples));
    if (cfg.samples == 0) return samples;

    if (g.edge_count() == 0) {
        // A connected graph without edges is a single node; so is every walk.
        for (LabeledGraph& s : samples) s = g;
        return samples;
    }

    std::uint64_t total_degree = 2ull * static_cast<std::uint64_t>(g.edge_count());
    parallel_for(samples.size(), cfg.threads, [&](std::size_t i) {
        Rng rng = Rng::derived(cfg.seed, i);
        samples[i] = walk_once(g, cfg, rng, total_degree);
    });
    return samples;
}

}  // namespace graphgen
