#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "graphgen/graph.hpp"
#include "graphgen/isomorphism.hpp"

namespace graphgen {

enum class DescriptorKind {
    Degree,
    Clustering,
    NodeLabel,
    EdgeLabel,
    JointLabelDegree,
};

/*
 * A normalized per-graph distribution. Ordered kinds (degree, clustering)
 * place mass on numeric coordinates and are compared with the
 * first-Wasserstein distance along that axis; categorical kinds (labels,
 * label-degree pairs) live on unordered keys and are compared with total
 * variation, which is Wasserstein under the discrete metric.
 */
struct Histogram {
    DescriptorKind kind = DescriptorKind::Degree;
    bool normalized = false;
    std::map<double, double> ordered;
    std::map<std::string, double> categorical;

    double mass() const;
};

Histogram degree_histogram(const LabeledGraph& g);
// 100 uniform bins on [0, 1]; coordinates are bin indices 0..99.
Histogram clustering_histogram(const LabeledGraph& g);
Histogram node_label_histogram(const LabeledGraph& g);
Histogram edge_label_histogram(const LabeledGraph& g);
// Keys pair a node label with its degree.
Histogram joint_label_degree_histogram(const LabeledGraph& g);

// First-Wasserstein distance between two histograms of the same kind.
double histogram_distance(const Histogram& a, const Histogram& b);

/*
 * Per-node counts over the 11 automorphism orbits of the 6 connected
 * four-node graphlets, in the standard numbering (orbits 4 through 14):
 * path ends / path middles, star leaves / star center, cycle, tailed
 * triangle tail / far pair / junction, diamond rim / hub, and clique.
 * Connected 4-sets are enumerated once each; classification uses the
 * induced edges.
 */
std::vector<std::array<std::uint64_t, 11>> orbit_counts(const LabeledGraph& g);

// Independent reference: classifies all C(n,4) node subsets directly.
// Quadratically slower; exists to test orbit_counts against.
std::vector<std::array<std::uint64_t, 11>> naive_orbit_counts(const LabeledGraph& g);

// Per-graph descriptor for the orbit metric: node-wise mean of the counts.
std::array<double, 11> mean_orbit_vector(const LabeledGraph& g);

struct MmdOptions {
    double sigma = 1.0;
    int threads = 0;
};

/*
 * Squared maximum mean discrepancy under a Gaussian kernel over the
 * first-Wasserstein distance, exp(-d^2 / (2 sigma^2)). Biased estimator
 * (diagonal included), clamped at zero. Throws std::invalid_argument on
 * empty sets or mixed descriptor kinds.
 */
double mmd(const std::vector<Histogram>& a, const std::vector<Histogram>& b,
           const MmdOptions& options = {});

// Same estimator over mean orbit vectors; the ground distance is total
// variation between the normalized vectors.
double orbit_mmd(const std::vector<std::array<double, 11>>& a,
                 const std::vector<std::array<double, 11>>& b, const MmdOptions& options = {});

struct NspdkOptions {
    int r_max = 2;
    int d_max = 4;
};

/*
 * Sparse feature map: (radius, distance, neighborhood-pair hash) -> count,
 * with the three components packed into the 64-bit key.
 */
struct NspdkFeatureVector {
    std::map<std::uint64_t, double> features;
};

/*
 * Features of all ordered node pairs within shortest-path distance d_max:
 * for every radius r <= r_max the two endpoints' neighborhoods are encoded
 * as breadth-first label sequences with per-layer sorting and hashed
 * together. Deterministic and label-sensitive, which is all the kernel
 * needs.
 */
NspdkFeatureVector nspdk_features(const LabeledGraph& g, const NspdkOptions& options = {});

// Cosine similarity of two feature vectors; 1 for identical graphs.
double nspdk_kernel(const NspdkFeatureVector& a, const NspdkFeatureVector& b);

// Squared MMD under the cosine kernel.
double nspdk_mmd(const std::vector<LabeledGraph>& a, const std::vector<LabeledGraph>& b,
                 const NspdkOptions& options = {}, int threads = 0);

/*
 * Percentage of generated graphs that embed into no training graph and
 * contain no training graph. Pairs whose subgraph search exhausts its
 * budget count as not contained; `budget_hits` (when given) reports how
 * often that happened.
 */
double novelty(const std::vector<LabeledGraph>& generated,
               const std::vector<LabeledGraph>& training, const MatchOptions& match = {},
               int threads = 0, std::uint64_t* budget_hits = nullptr);

/*
 * Keep-first scan: a graph is dropped when it embeds into an already-kept
 * graph or an already-kept graph embeds into it. Returns the percentage
 * kept, so n identical graphs score 100/n.
 */
double uniqueness(const std::vector<LabeledGraph>& generated, const MatchOptions& match = {},
                  std::uint64_t* budget_hits = nullptr);

struct EvalConfig {
    // The distribution metrics average over `batch_count` random
    // `batch_size`-vs-`batch_size` comparisons; sets at or below the batch
    // size are used whole.
    int batch_count = 10;
    int batch_size = 256;
    double sigma = 1.0;
    NspdkOptions nspdk;
    MatchOptions match;
    std::uint64_t seed = 0;
    int threads = 0;
};

struct MetricReport {
    double degree_mmd = 0.0;
    double clustering_mmd = 0.0;
    double orbit_mmd = 0.0;
    double nspdk_mmd = 0.0;
    double avg_nodes_gen = 0.0;
    double avg_nodes_ref = 0.0;
    double avg_edges_gen = 0.0;
    double avg_edges_ref = 0.0;
    double node_label_mmd = 0.0;
    double edge_label_mmd = 0.0;
    double joint_label_degree_mmd = 0.0;
    double novelty_pct = 0.0;
    double uniqueness_pct = 0.0;
    std::uint64_t iso_budget_hits = 0;
};

/*
 * The full metric suite: distribution and kernel distances between the
 * generated and reference sets, size averages, and the redundancy checks
 * against the training set. Deterministic given cfg.seed.
 */
MetricReport evaluate(const std::vector<LabeledGraph>& generated,
                      const std::vector<LabeledGraph>& reference,
                      const std::vector<LabeledGraph>& training, const EvalConfig& cfg = {});

std::string report_to_json(const MetricReport& report);

// Header plus one row, columns in the order the report fields declare.
std::string report_to_csv(const MetricReport& report);

}  // namespace graphgen
