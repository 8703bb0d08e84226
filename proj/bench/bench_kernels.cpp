// Times the parallel kernels against their serial (threads = 1) reference
// paths and checks that both produce identical results. Build target
// graphgen_bench; not part of the test suite.

#include <chrono>
#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include "graphgen/datagen.hpp"
#include "graphgen/dfs_code.hpp"
#include "graphgen/graph.hpp"
#include "graphgen/metrics.hpp"
#include "graphgen/model.hpp"
#include "graphgen/rng.hpp"

using namespace graphgen;

namespace {

double seconds_of(const std::function<void()>& body) {
    auto begin = std::chrono::steady_clock::now();
    body();
    auto end = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(end - begin).count();
}

void report(const char* name, double serial, double parallel, int threads, bool identical) {
    std::printf("%-22s serial %8.3fs   %2d threads %8.3fs   speedup %5.2fx   identical: %s\n",
                name, serial, threads, parallel, serial / parallel, identical ? "yes" : "NO");
}

LabeledGraph random_graph(Rng& rng, int nodes, int extra) {
    static const std::vector<std::string> node_pool{"A", "B", "C"};
    static const std::vector<std::string> edge_pool{"x", "y"};
    LabeledGraph g;
    for (int v = 0; v < nodes; ++v)
        g.add_node(node_pool[rng.next_below(node_pool.size())]);
    for (int v = 1; v < nodes; ++v)
        g.add_edge(static_cast<int>(rng.next_below(v)), v,
                   edge_pool[rng.next_below(edge_pool.size())]);
    int added = 0;
    int attempts = 0;
    while (added < extra && attempts < 50 * (extra + 1)) {
        ++attempts;
        int u = static_cast<int>(rng.next_below(nodes));
        int v = static_cast<int>(rng.next_below(nodes));
        if (u == v || g.has_edge(u, v)) continue;
        g.add_edge(u, v, edge_pool[rng.next_below(edge_pool.size())]);
        ++added;
    }
    return g;
}

}  // namespace

int main() {
    int threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 2) threads = 2;
    std::printf("kernel benchmark, %d hardware threads\n\n", threads);

    Rng rng(2024);

    // Batch canonization.
    {
        std::vector<LabeledGraph> graphs;
        for (int i = 0; i < 400; ++i)
            graphs.push_back(random_graph(rng, 10 + static_cast<int>(rng.next_below(5)), 6));
        std::vector<DfsCode> serial_codes;
        std::vector<DfsCode> parallel_codes;
        double ts = seconds_of([&] { serial_codes = canonize_all(graphs, 1); });
        double tp = seconds_of([&] { parallel_codes = canonize_all(graphs, threads); });
        report("canonize_all", ts, tp, threads, serial_codes == parallel_codes);
    }

    // Graph generation from a quickly trained model.
    {
        std::vector<LabeledGraph> train;
        for (int i = 0; i < 12; ++i) train.push_back(random_graph(rng, 6, 3));
        TrainConfig cfg = TrainConfig::desk_profile();
        cfg.epochs = 40;
        cfg.threads = threads;
        cfg.seed = 7;
        TrainResult trained = train_model(train, train, cfg);

        std::vector<LabeledGraph> serial_graphs;
        std::vector<LabeledGraph> parallel_graphs;
        double ts = seconds_of([&] {
            serial_graphs = generate_graphs(trained.model, 400, trained.model.config.max_len, 5, 1);
        });
        double tp = seconds_of([&] {
            parallel_graphs =
                generate_graphs(trained.model, 400, trained.model.config.max_len, 5, threads);
        });
        report("generate_graphs", ts, tp, threads,
               write_graphs_text(serial_graphs) == write_graphs_text(parallel_graphs));
    }

    // MMD kernel matrices over degree histograms.
    {
        std::vector<Histogram> a;
        std::vector<Histogram> b;
        for (int i = 0; i < 700; ++i) {
            a.push_back(degree_histogram(random_graph(rng, 30, 20)));
            b.push_back(degree_histogram(random_graph(rng, 30, 15)));
        }
        double va = 0.0;
        double vb = 0.0;
        double ts = seconds_of([&] { va = mmd(a, b, {1.0, 1}); });
        double tp = seconds_of([&] { vb = mmd(a, b, {1.0, threads}); });
        report("mmd (degree)", ts, tp, threads, va == vb);
    }

    // NSPDK feature extraction plus kernel matrices.
    {
        std::vector<LabeledGraph> a;
        std::vector<LabeledGraph> b;
        for (int i = 0; i < 150; ++i) {
            a.push_back(random_graph(rng, 25, 15));
            b.push_back(random_graph(rng, 25, 12));
        }
        double va = 0.0;
        double vb = 0.0;
        double ts = seconds_of([&] { va = nspdk_mmd(a, b, {}, 1); });
        double tp = seconds_of([&] { vb = nspdk_mmd(a, b, {}, threads); });
        report("nspdk_mmd", ts, tp, threads, va == vb);
    }

    // Random-walk subgraph sampling from one large graph.
    {
        LabeledGraph big = random_graph(rng, 3000, 4500);
        RwrConfig cfg;
        cfg.samples = 4000;
        cfg.seed = 77;
        std::vector<LabeledGraph> sa;
        std::vector<LabeledGraph> sb;
        cfg.threads = 1;
        double ts = seconds_of([&] { sa = rwr_sample(big, cfg); });
        cfg.threads = threads;
        double tp = seconds_of([&] { sb = rwr_sample(big, cfg); });
        report("rwr_sample", ts, tp, threads, write_graphs_text(sa) == write_graphs_text(sb));
    }

    return 0;
}
