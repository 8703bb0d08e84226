#include "graphgen/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <queue>
#include <stdexcept>

#include <json.hpp>

#include "graphgen/parallel.hpp"
#include "graphgen/rng.hpp"

namespace graphgen {

namespace {

bool is_ordered_kind(DescriptorKind kind) {
    return kind == DescriptorKind::Degree || kind == DescriptorKind::Clustering;
}

void normalize(std::map<double, double>& entries) {
    double total = 0.0;
    for (const auto& [key, mass] : entries) total += mass;
    if (total <= 0.0) return;
    for (auto& [key, mass] : entries) mass /= total;
}

void normalize(std::map<std::string, double>& entries) {
    double total = 0.0;
    for (const auto& [key, mass] : entries) total += mass;
    if (total <= 0.0) return;
    for (auto& [key, mass] : entries) mass /= total;
}

// First-Wasserstein distance on the real line: integral of the CDF gap.
double w1_ordered(const std::map<double, double>& p, const std::map<double, double>& q) {
    auto ip = p.begin();
    auto iq = q.begin();
    double cdf_p = 0.0;
    double cdf_q = 0.0;
    double prev = 0.0;
    double total = 0.0;
    bool started = false;
    while (ip != p.end() || iq != q.end()) {
        double x;
        if (ip == p.end())
            x = iq->first;
        else if (iq == q.end())
            x = ip->first;
        else
            x = std::min(ip->first, iq->first);
        if (started) total += std::abs(cdf_p - cdf_q) * (x - prev);
        if (ip != p.end() && ip->first == x) cdf_p += (ip++)->second;
        if (iq != q.end() && iq->first == x) cdf_q += (iq++)->second;
        prev = x;
        started = true;
    }
    return total;
}

// Total variation, which is Wasserstein under the 0/1 ground metric.
double tv_categorical(const std::map<std::string, double>& p,
                      const std::map<std::string, double>& q) {
    double sum = 0.0;
    auto ip = p.begin();
    auto iq = q.begin();
    while (ip != p.end() || iq != q.end()) {
        if (iq == q.end() || (ip != p.end() && ip->first < iq->first))
            sum += std::abs((ip++)->second);
        else if (ip == p.end() || iq->first < ip->first)
            sum += std::abs((iq++)->second);
        else {
            sum += std::abs(ip->second - iq->second);
            ++ip;
            ++iq;
        }
    }
    return 0.5 * sum;
}

double gaussian(double distance, double sigma) {
    return std::exp(-(distance * distance) / (2.0 * sigma * sigma));
}

/*
 * Biased squared-MMD estimator: mean_AA k + mean_BB k - 2 mean_AB k with the
 * diagonals included. Row sums are computed in parallel into slots and
 * reduced serially, so the result is independent of scheduling.
 */
template <typename D, typename Kernel>
double squared_mmd(const std::vector<D>& a, const std::vector<D>& b, int threads, Kernel kernel) {
    auto mean_gram = [&](const std::vector<D>& x, const std::vector<D>& y) {
        std::vector<double> rows(x.size(), 0.0);
        parallel_for(x.size(), threads, [&](std::size_t i) {
            double sum = 0.0;
            for (const D& item : y) sum += kernel(x[i], item);
            rows[i] = sum;
        });
        double total = std::accumulate(rows.begin(), rows.end(), 0.0);
        return total / (static_cast<double>(x.size()) * static_cast<double>(y.size()));
    };
    double value = mean_gram(a, a) + mean_gram(b, b) - 2.0 * mean_gram(a, b);
    return std::max(0.0, value);
}

std::uint64_t fnv1a64(const unsigned char* data, std::size_t size) {
    std::uint64_t hash = 14695981039346656037ull;
    for (std::size_t i = 0; i < size; ++i) {
        hash ^= data[i];
        hash *= 1099511628211ull;
    }
    return hash;
}

std::uint64_t fnv1a64(const std::string& s) {
    return fnv1a64(reinterpret_cast<const unsigned char*>(s.data()), s.size());
}

}  // namespace

double Histogram::mass() const {
    double total = 0.0;
    if (is_ordered_kind(kind))
        for (const auto& [key, m] : ordered) total += m;
    else
        for (const auto& [key, m] : categorical) total += m;
    return total;
}

Histogram degree_histogram(const LabeledGraph& g) {
    Histogram h;
    h.kind = DescriptorKind::Degree;
    for (int v = 0; v < g.node_count(); ++v)
        h.ordered[static_cast<double>(g.degree(v))] += 1.0;
    normalize(h.ordered);
    h.normalized = true;
    return h;
}

Histogram clustering_histogram(const LabeledGraph& g) {
    Histogram h;
    h.kind = DescriptorKind::Clustering;
    for (int v = 0; v < g.node_count(); ++v) {
        int bin = static_cast<int>(clustering_coefficient(g, v) * 100.0);
        if (bin > 99) bin = 99;
        h.ordered[static_cast<double>(bin)] += 1.0;
    }
    normalize(h.ordered);
    h.normalized = true;
    return h;
}

Histogram node_label_histogram(const LabeledGraph& g) {
    Histogram h;
    h.kind = DescriptorKind::NodeLabel;
    for (int v = 0; v < g.node_count(); ++v) h.categorical[g.node_label(v)] += 1.0;
    normalize(h.categorical);
    h.normalized = true;
    return h;
}

Histogram edge_label_histogram(const LabeledGraph& g) {
    Histogram h;
    h.kind = DescriptorKind::EdgeLabel;
    for (const Edge& e : g.edges()) h.categorical[e.label] += 1.0;
    normalize(h.categorical);
    h.normalized = true;
    return h;
}

Histogram joint_label_degree_histogram(const LabeledGraph& g) {
    Histogram h;
    h.kind = DescriptorKind::JointLabelDegree;
    for (int v = 0; v < g.node_count(); ++v) {
        std::string key = g.node_label(v);
        key.push_back('\x1f');
        key += std::to_string(g.degree(v));
        h.categorical[key] += 1.0;
    }
    normalize(h.categorical);
    h.normalized = true;
    return h;
}

double histogram_distance(const Histogram& a, const Histogram& b) {
    if (a.kind != b.kind)
        throw std::invalid_argument("histogram_distance: descriptor kinds differ");
    if (is_ordered_kind(a.kind)) return w1_ordered(a.ordered, b.ordered);
    return tv_categorical(a.categorical, b.categorical);
}

namespace {

/*
 * Orbit bookkeeping. Index 0..10 covers the standard orbit numbering 4..14:
 * within each connected four-node graphlet the orbits coincide with the
 * induced-degree classes, which is what both classifiers rely on.
 */

// Pair slots in the 6-bit adjacency mask: (0,1)(0,2)(0,3)(1,2)(1,3)(2,3).
constexpr int kPairA[6] = {0, 0, 0, 1, 1, 2};
constexpr int kPairB[6] = {1, 2, 3, 2, 3, 3};

struct QuadOrbits {
    std::array<std::int8_t, 4> orbit;  // -1: not a connected graphlet
};

std::array<QuadOrbits, 64> build_orbit_table() {
    std::array<QuadOrbits, 64> table{};
    for (int mask = 0; mask < 64; ++mask) {
        QuadOrbits& entry = table[mask];
        entry.orbit = {-1, -1, -1, -1};
        int deg[4] = {0, 0, 0, 0};
        int edges = 0;
        for (int bit = 0; bit < 6; ++bit) {
            if (mask & (1 << bit)) {
                ++edges;
                ++deg[kPairA[bit]];
                ++deg[kPairB[bit]];
            }
        }
        int min_deg = *std::min_element(deg, deg + 4);
        int max_deg = *std::max_element(deg, deg + 4);
        if (edges < 3 || min_deg == 0) continue;  // too sparse or disconnected
        for (int i = 0; i < 4; ++i) {
            std::int8_t o = -1;
            if (edges == 3 && max_deg == 3)
                o = deg[i] == 1 ? 2 : 3;  // star leaf / center
            else if (edges == 3)
                o = deg[i] == 1 ? 0 : 1;  // path end / middle
            else if (edges == 4 && max_deg == 3)
                o = deg[i] == 1 ? 5 : (deg[i] == 2 ? 6 : 7);  // tailed triangle
            else if (edges == 4)
                o = 4;  // cycle
            else if (edges == 5)
                o = deg[i] == 2 ? 8 : 9;  // diamond rim / hub
            else
                o = 10;  // clique
            entry.orbit[i] = o;
        }
    }
    return table;
}

const std::array<QuadOrbits, 64>& orbit_table() {
    static const std::array<QuadOrbits, 64> table = build_orbit_table();
    return table;
}

struct DenseAdjacency {
    int n;
    std::vector<char> bits;
    std::vector<std::vector<int>> neighbors;

    explicit DenseAdjacency(const LabeledGraph& g) : n(g.node_count()) {
        bits.assign(static_cast<std::size_t>(n) * n, 0);
        neighbors.resize(n);
        for (int v = 0; v < n; ++v)
            for (const auto& [u, edge_index] : g.neighbors(v)) {
                bits[static_cast<std::size_t>(v) * n + u] = 1;
                neighbors[v].push_back(u);
            }
    }

    bool at(int u, int v) const { return bits[static_cast<std::size_t>(u) * n + v] != 0; }
};

void bump_quadruple(const DenseAdjacency& adj, const int* sub,
                    std::vector<std::array<std::uint64_t, 11>>& counts) {
    int mask = 0;
    for (int bit = 0; bit < 6; ++bit)
        if (adj.at(sub[kPairA[bit]], sub[kPairB[bit]])) mask |= 1 << bit;
    const QuadOrbits& entry = orbit_table()[mask];
    if (entry.orbit[0] < 0) return;
    for (int i = 0; i < 4; ++i) ++counts[sub[i]][entry.orbit[i]];
}

// Wernicke's ESU, specialized to size four: every connected induced
// four-node subgraph is visited exactly once.
void esu_extend(const DenseAdjacency& adj, int root, int* sub, int depth,
                std::vector<int> extension, std::vector<std::array<std::uint64_t, 11>>& counts) {
    if (depth == 4) {
        bump_quadruple(adj, sub, counts);
        return;
    }
    while (!extension.empty()) {
        int w = extension.back();
        extension.pop_back();
        std::vector<int> next = extension;
        for (int u : adj.neighbors[w]) {
            if (u <= root) continue;
            bool fresh = true;
            for (int i = 0; i < depth && fresh; ++i)
                if (sub[i] == u || adj.at(sub[i], u)) fresh = false;
            if (fresh && std::find(next.begin(), next.end(), u) == next.end()) next.push_back(u);
        }
        sub[depth] = w;
        esu_extend(adj, root, sub, depth + 1, std::move(next), counts);
    }
}

}  // namespace

std::vector<std::array<std::uint64_t, 11>> orbit_counts(const LabeledGraph& g) {
    std::vector<std::array<std::uint64_t, 11>> counts(g.node_count());
    for (auto& row : counts) row.fill(0);
    if (g.node_count() < 4) return counts;

    DenseAdjacency adj(g);
    int sub[4];
    for (int v = 0; v < adj.n; ++v) {
        sub[0] = v;
        std::vector<int> extension;
        for (int u : adj.neighbors[v])
            if (u > v) extension.push_back(u);
        esu_extend(adj, v, sub, 1, std::move(extension), counts);
    }
    return counts;
}

std::vector<std::array<std::uint64_t, 11>> naive_orbit_counts(const LabeledGraph& g) {
    int n = g.node_count();
    std::vector<std::array<std::uint64_t, 11>> counts(n);
    for (auto& row : counts) row.fill(0);

    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = b + 1; c < n; ++c)
                for (int d = c + 1; d < n; ++d) {
                    int quad[4] = {a, b, c, d};
                    int deg[4] = {0, 0, 0, 0};
                    int edges = 0;
                    for (int i = 0; i < 4; ++i)
                        for (int j = i + 1; j < 4; ++j)
                            if (g.has_edge(quad[i], quad[j])) {
                                ++edges;
                                ++deg[i];
                                ++deg[j];
                            }
                    int sorted[4] = {deg[0], deg[1], deg[2], deg[3]};
                    std::sort(sorted, sorted + 4);
                    auto matches = [&](int d0, int d1, int d2, int d3) {
                        return sorted[0] == d0 && sorted[1] == d1 && sorted[2] == d2 &&
                               sorted[3] == d3;
                    };
                    for (int i = 0; i < 4; ++i) {
                        int orbit = -1;
                        if (edges == 3 && matches(1, 1, 2, 2))
                            orbit = deg[i] == 1 ? 0 : 1;
                        else if (edges == 3 && matches(1, 1, 1, 3))
                            orbit = deg[i] == 1 ? 2 : 3;
                        else if (edges == 4 && matches(2, 2, 2, 2))
                            orbit = 4;
                        else if (edges == 4 && matches(1, 2, 2, 3))
                            orbit = deg[i] == 1 ? 5 : (deg[i] == 2 ? 6 : 7);
                        else if (edges == 5 && matches(2, 2, 3, 3))
                            orbit = deg[i] == 2 ? 8 : 9;
                        else if (edges == 6)
                            orbit = 10;
                        if (orbit >= 0) ++counts[quad[i]][orbit];
                    }
                }
    return counts;
}

std::array<double, 11> mean_orbit_vector(const LabeledGraph& g) {
    std::array<double, 11> mean{};
    auto counts = orbit_counts(g);
    if (counts.empty()) return mean;
    for (const auto& row : counts)
        for (int o = 0; o < 11; ++o) mean[o] += static_cast<double>(row[o]);
    for (int o = 0; o < 11; ++o) mean[o] /= static_cast<double>(counts.size());
    return mean;
}

double mmd(const std::vector<Histogram>& a, const std::vector<Histogram>& b,
           const MmdOptions& options) {
    if (a.empty() || b.empty()) throw std::invalid_argument("mmd: empty descriptor set");
    DescriptorKind kind = a.front().kind;
    for (const Histogram& h : a)
        if (h.kind != kind) throw std::invalid_argument("mmd: descriptor kinds differ");
    for (const Histogram& h : b)
        if (h.kind != kind) throw std::invalid_argument("mmd: descriptor kinds differ");

    double sigma = options.sigma;
    return squared_mmd(a, b, options.threads, [sigma](const Histogram& x, const Histogram& y) {
        return gaussian(histogram_distance(x, y), sigma);
    });
}

namespace {

// Total variation between orbit vectors after normalizing each to unit
// mass; an all-zero vector (graphs with fewer than four nodes) stays zero.
double orbit_distance(const std::array<double, 11>& a, const std::array<double, 11>& b) {
    double sum_a = std::accumulate(a.begin(), a.end(), 0.0);
    double sum_b = std::accumulate(b.begin(), b.end(), 0.0);
    double tv = 0.0;
    for (int o = 0; o < 11; ++o) {
        double pa = sum_a > 0.0 ? a[o] / sum_a : 0.0;
        double pb = sum_b > 0.0 ? b[o] / sum_b : 0.0;
        tv += std::abs(pa - pb);
    }
    return 0.5 * tv;
}

}  // namespace

double orbit_mmd(const std::vector<std::array<double, 11>>& a,
                 const std::vector<std::array<double, 11>>& b, const MmdOptions& options) {
    if (a.empty() || b.empty()) throw std::invalid_argument("mmd: empty descriptor set");
    double sigma = options.sigma;
    return squared_mmd(a, b, options.threads,
                       [sigma](const std::array<double, 11>& x, const std::array<double, 11>& y) {
                           return gaussian(orbit_distance(x, y), sigma);
                       });
}

namespace {

// Breadth-first distances from `start`, capped at `limit`; unreached nodes
// keep distance -1.
std::vector<int> bfs_distances(const DenseAdjacency& adj, int start, int limit) {
    std::vector<int> dist(adj.n, -1);
    dist[start] = 0;
    std::queue<int> frontier;
    frontier.push(start);
    while (!frontier.empty()) {
        int v = frontier.front();
        frontier.pop();
        if (dist[v] == limit) continue;
        for (int u : adj.neighbors[v])
            if (dist[u] < 0) {
                dist[u] = dist[v] + 1;
                frontier.push(u);
            }
    }
    return dist;
}

/*
 * Radius-r neighborhood encoding rooted at u: per breadth-first layer, the
 * sorted node labels, then the sorted labels of edges whose deeper endpoint
 * lies in that layer ("=" marks an intra-layer edge, "<" a cross-layer
 * one). Lossy but deterministic and sensitive to labels and local shape.
 */
std::string encode_neighborhood(const LabeledGraph& g, const DenseAdjacency& adj,
                                const std::vector<int>& dist, int r) {
    std::string enc;
    for (int layer = 0; layer <= r; ++layer) {
        std::vector<std::string> node_part;
        for (int v = 0; v < adj.n; ++v)
            if (dist[v] == layer) node_part.push_back(g.node_label(v));
        std::sort(node_part.begin(), node_part.end());
        enc.push_back('|');
        for (const std::string& label : node_part) {
            enc += label;
            enc.push_back(',');
        }
        if (layer == 0) continue;
        std::vector<std::string> edge_part;
        for (const Edge& e : g.edges()) {
            int du = dist[e.u];
            int dv = dist[e.v];
            if (du < 0 || dv < 0) continue;
            if (std::max(du, dv) != layer || std::min(du, dv) < layer - 1) continue;
            edge_part.push_back(e.label + (du == dv ? "=" : "<"));
        }
        std::sort(edge_part.begin(), edge_part.end());
        enc.push_back(';');
        for (const std::string& label : edge_part) {
            enc += label;
            enc.push_back(',');
        }
    }
    return enc;
}

std::uint64_t pack_feature(int r, int d, std::uint64_t hu, std::uint64_t hv) {
    unsigned char buf[18];
    buf[0] = static_cast<unsigned char>(r);
    buf[1] = static_cast<unsigned char>(d);
    for (int i = 0; i < 8; ++i) buf[2 + i] = static_cast<unsigned char>((hu >> (8 * i)) & 0xFF);
    for (int i = 0; i < 8; ++i) buf[10 + i] = static_cast<unsigned char>((hv >> (8 * i)) & 0xFF);
    return fnv1a64(buf, sizeof buf);
}

}  // namespace

NspdkFeatureVector nspdk_features(const LabeledGraph& g, const NspdkOptions& options) {
    if (options.r_max < 0 || options.d_max < 0)
        throw std::invalid_argument("nspdk: radii must be non-negative");
    DenseAdjacency adj(g);
    int cap = std::max(options.r_max, options.d_max);

    // Per node: capped BFS distances, then one encoding hash per radius.
    std::vector<std::vector<int>> dist(adj.n);
    std::vector<std::vector<std::uint64_t>> enc(adj.n);
    for (int v = 0; v < adj.n; ++v) {
        dist[v] = bfs_distances(adj, v, cap);
        enc[v].resize(options.r_max + 1);
        for (int r = 0; r <= options.r_max; ++r)
            enc[v][r] = fnv1a64(encode_neighborhood(g, adj, dist[v], r));
    }

    NspdkFeatureVector features;
    for (int u = 0; u < adj.n; ++u)
        for (int v = 0; v < adj.n; ++v) {
            int d = dist[u][v];
            if (d < 0 || d > options.d_max) continue;
            for (int r = 0; r <= options.r_max; ++r)
                features.features[pack_feature(r, d, enc[u][r], enc[v][r])] += 1.0;
        }
    return features;
}

double nspdk_kernel(const NspdkFeatureVector& a, const NspdkFeatureVector& b) {
    double dot = 0.0;
    double norm_a = 0.0;
    double norm_b = 0.0;
    for (const auto& [key, count] : a.features) norm_a += count * count;
    for (const auto& [key, count] : b.features) norm_b += count * count;
    auto ia = a.features.begin();
    auto ib = b.features.begin();
    while (ia != a.features.end() && ib != b.features.end()) {
        if (ia->first < ib->first)
            ++ia;
        else if (ib->first < ia->first)
            ++ib;
        else {
            dot += ia->second * ib->second;
            ++ia;
            ++ib;
        }
    }
    if (norm_a <= 0.0 || norm_b <= 0.0) return 0.0;
    return dot / std::sqrt(norm_a * norm_b);
}

double nspdk_mmd(const std::vector<LabeledGraph>& a, const std::vector<LabeledGraph>& b,
                 const NspdkOptions& options, int threads) {
    if (a.empty() || b.empty()) throw std::invalid_argument("mmd: empty descriptor set");
    std::vector<NspdkFeatureVector> fa(a.size());
    std::vector<NspdkFeatureVector> fb(b.size());
    parallel_for(a.size(), threads, [&](std::size_t i) { fa[i] = nspdk_features(a[i], options); });
    parallel_for(b.size(), threads, [&](std::size_t i) { fb[i] = nspdk_features(b[i], options); });
    return squared_mmd(fa, fb, threads, nspdk_kernel);
}

namespace {

// Containment in either direction, with a budget miss counting as "not
// contained" so the redundancy metrics always terminate.
bool either_contains(const LabeledGraph& a, const LabeledGraph& b, const MatchOptions& match,
                     std::uint64_t& budget_hits) {
    MatchOutcome ab = subgraph_match(a, b, match);
    if (ab == MatchOutcome::Found) return true;
    if (ab == MatchOutcome::BudgetExceeded) ++budget_hits;
    MatchOutcome ba = subgraph_match(b, a, match);
    if (ba == MatchOutcome::Found) return true;
    if (ba == MatchOutcome::BudgetExceeded) ++budget_hits;
    return false;
}

}  // namespace

double novelty(const std::vector<LabeledGraph>& generated,
               const std::vector<LabeledGraph>& training, const MatchOptions& match, int threads,
               std::uint64_t* budget_hits) {
    if (generated.empty() || training.empty())
        throw std::invalid_argument("novelty: empty input set");

    std::vector<std::uint64_t> hits(generated.size(), 0);
    std::vector<char> novel(generated.size(), 1);
    parallel_for(generated.size(), threads, [&](std::size_t i) {
        for (const LabeledGraph& reference : training) {
            if (either_contains(generated[i], reference, match, hits[i])) {
                novel[i] = 0;
                break;
            }
        }
    });

    if (budget_hits != nullptr)
        *budget_hits += std::accumulate(hits.begin(), hits.end(), std::uint64_t{0});
    std::size_t count = 0;
    for (char flag : novel) count += flag != 0;
    return 100.0 * static_cast<double>(count) / static_cast<double>(generated.size());
}

double uniqueness(const std::vector<LabeledGraph>& generated, const MatchOptions& match,
                  std::uint64_t* budget_hits) {
    if (generated.empty()) throw std::invalid_argument("uniqueness: empty input set");

    std::uint64_t hits = 0;
    std::vector<const LabeledGraph*> kept;
    for (const LabeledGraph& g : generated) {
        bool redundant = false;
        for (const LabeledGraph* k : kept) {
            if (either_contains(g, *k, match, hits)) {
                redundant = true;
                break;
            }
        }
        if (!redundant) kept.push_back(&g);
    }

    if (budget_hits != nullptr) *budget_hits += hits;
    return 100.0 * static_cast<double>(kept.size()) / static_cast<double>(generated.size());
}

namespace {

// Seeded index sample without replacement; sets at or below the batch size
// are taken whole.
std::vector<std::size_t> sample_indices(std::size_t n, int batch, Rng& rng) {
    std::vector<std::size_t> indices(n);
    std::iota(indices.begin(), indices.end(), std::size_t{0});
    if (n <= static_cast<std::size_t>(batch)) return indices;
    shuffle(indices, rng);
    indices.resize(static_cast<std::size_t>(batch));
    return indices;
}

template <typename D>
std::vector<D> select(const std::vector<D>& items, const std::vector<std::size_t>& indices) {
    std::vector<D> out;
    out.reserve(indices.size());
    for (std::size_t i : indices) out.push_back(items[i]);
    return out;
}

}  // namespace

MetricReport evaluate(const std::vector<LabeledGraph>& generated,
                      const std::vector<LabeledGraph>& reference,
                      const std::vector<LabeledGraph>& training, const EvalConfig& cfg) {
    if (generated.empty() || reference.empty() || training.empty())
        throw std::invalid_argument("evaluate: empty input set");
    if (cfg.batch_count < 1 || cfg.batch_size < 1)
        throw std::invalid_argument("evaluate: batch protocol must be positive");

    struct Descriptors {
        std::vector<Histogram> degree, clustering, node_label, edge_label, joint;
        std::vector<std::array<double, 11>> orbit;
        std::vector<NspdkFeatureVector> nspdk;
    };
    auto describe = [&](const std::vector<LabeledGraph>& graphs) {
        Descriptors d;
        d.degree.resize(graphs.size());
        d.clustering.resize(graphs.size());
        d.node_label.resize(graphs.size());
        d.edge_label.resize(graphs.size());
        d.joint.resize(graphs.size());
        d.orbit.resize(graphs.size());
        d.nspdk.resize(graphs.size());
        parallel_for(graphs.size(), cfg.threads, [&](std::size_t i) {
            d.degree[i] = degree_histogram(graphs[i]);
            d.clustering[i] = clustering_histogram(graphs[i]);
            d.node_label[i] = node_label_histogram(graphs[i]);
            d.edge_label[i] = edge_label_histogram(graphs[i]);
            d.joint[i] = joint_label_degree_histogram(graphs[i]);
            d.orbit[i] = mean_orbit_vector(graphs[i]);
            d.nspdk[i] = nspdk_features(graphs[i], cfg.nspdk);
        });
        return d;
    };
    Descriptors gen = describe(generated);
    Descriptors ref = describe(reference);

    MmdOptions mmd_options{cfg.sigma, cfg.threads};
    MetricReport report;
    for (int run = 0; run < cfg.batch_count; ++run) {
        Rng rng = Rng::derived(cfg.seed, static_cast<std::uint64_t>(run));
        std::vector<std::size_t> ia = sample_indices(generated.size(), cfg.batch_size, rng);
        std::vector<std::size_t> ib = sample_indices(reference.size(), cfg.batch_size, rng);

        report.degree_mmd += mmd(select(gen.degree, ia), select(ref.degree, ib), mmd_options);
        report.clustering_mmd +=
            mmd(select(gen.clustering, ia), select(ref.clustering, ib), mmd_options);
        report.orbit_mmd += orbit_mmd(select(gen.orbit, ia), select(ref.orbit, ib), mmd_options);
        report.nspdk_mmd += squared_mmd(select(gen.nspdk, ia), select(ref.nspdk, ib), cfg.threads,
                                        nspdk_kernel);
        report.node_label_mmd +=
            mmd(select(gen.node_label, ia), select(ref.node_label, ib), mmd_options);
        report.edge_label_mmd +=
            mmd(select(gen.edge_label, ia), select(ref.edge_label, ib), mmd_options);
        report.joint_label_degree_mmd +=
            mmd(select(gen.joint, ia), select(ref.joint, ib), mmd_options);
    }
    report.degree_mmd /= cfg.batch_count;
    report.clustering_mmd /= cfg.batch_count;
    report.orbit_mmd /= cfg.batch_count;
    report.nspdk_mmd /= cfg.batch_count;
    report.node_label_mmd /= cfg.batch_count;
    report.edge_label_mmd /= cfg.batch_count;
    report.joint_label_degree_mmd /= cfg.batch_count;

    auto averages = [](const std::vector<LabeledGraph>& graphs, double& nodes, double& edges) {
        double vn = 0.0;
        double ve = 0.0;
        for (const LabeledGraph& g : graphs) {
            vn += g.node_count();
            ve += g.edge_count();
        }
        nodes = vn / static_cast<double>(graphs.size());
        edges = ve / static_cast<double>(graphs.size());
    };
    averages(generated, report.avg_nodes_gen, report.avg_edges_gen);
    averages(reference, report.avg_nodes_ref, report.avg_edges_ref);

    std::uint64_t budget_hits = 0;
    report.novelty_pct = novelty(generated, training, cfg.match, cfg.threads, &budget_hits);
    report.uniqueness_pct = uniqueness(generated, cfg.match, &budget_hits);
    report.iso_budget_hits = budget_hits;
    return report;
}

std::string report_to_json(const MetricReport& report) {
    nlohmann::ordered_json j;
    j["degree_mmd"] = report.degree_mmd;
    j["clustering_mmd"] = report.clustering_mmd;
    j["orbit_mmd"] = report.orbit_mmd;
    j["nspdk_mmd"] = report.nspdk_mmd;
    j["avg_nodes_gen"] = report.avg_nodes_gen;
    j["avg_nodes_ref"] = report.avg_nodes_ref;
    j["avg_edges_gen"] = report.avg_edges_gen;
    j["avg_edges_ref"] = report.avg_edges_ref;
    j["node_label_mmd"] = report.node_label_mmd;
    j["edge_label_mmd"] = report.edge_label_mmd;
    j["joint_label_degree_mmd"] = report.joint_label_degree_mmd;
    j["novelty_pct"] = report.novelty_pct;
    j["uniqueness_pct"] = report.uniqueness_pct;
    j["iso_budget_hits"] = report.iso_budget_hits;
    return j.dump(2) + "\n";
}

std::string report_to_csv(const MetricReport& report) {
    const double columns[] = {report.degree_mmd,
                              report.clustering_mmd,
                              report.orbit_mmd,
                              report.nspdk_mmd,
                              report.avg_nodes_gen,
                              report.avg_nodes_ref,
                              report.avg_edges_gen,
                              report.avg_edges_ref,
                              report.node_label_mmd,
                              report.edge_label_mmd,
                              report.joint_label_degree_mmd,
                              report.novelty_pct,
                              report.uniqueness_pct};
    std::string out =
        "degree_mmd,clustering_mmd,orbit_mmd,nspdk_mmd,avg_nodes_gen,avg_nodes_ref,"
        "avg_edges_gen,avg_edges_ref,node_label_mmd,edge_label_mmd,joint_label_degree_mmd,"
        "novelty_pct,uniqueness_pct,iso_budget_hits\n";
    char cell[64];
    for (double value : columns) {
        std::snprintf(cell, sizeof cell, "%.17g,", value);
        out += cell;
    }
    std::snprintf(cell, sizeof cell, "%llu\n",
                  static_cast<unsigned long long>(report.iso_budget_hits));
    out += cell;
    return out;
}

}  // namespace graphgen
