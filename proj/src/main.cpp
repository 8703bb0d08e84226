#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "graphgen/config.hpp"
#include "graphgen/datagen.hpp"
#include "graphgen/dfs_code.hpp"
#include "graphgen/graph.hpp"
#include "graphgen/metrics.hpp"
#include "graphgen/model.hpp"
#include "graphgen/parallel.hpp"

namespace fs = std::filesystem;
using namespace graphgen;

namespace {

/*
 * Invariant augmentation inserts ", " between label parts, which the
 * dataset format cannot carry (labels are whitespace-free tokens). The
 * pipeline therefore squeezes the separator to a bare comma; the parts
 * themselves never contain whitespace when they come from a parsed file.
 */
LabeledGraph squeeze_label_whitespace(const LabeledGraph& g) {
    LabeledGraph out;
    for (int v = 0; v < g.node_count(); ++v) {
        std::string label = g.node_label(v);
        std::size_t at = 0;
        while ((at = label.find(", ", at)) != std::string::npos) label.erase(at + 1, 1);
        out.add_node(std::move(label));
    }
    for (const Edge& e : g.edges()) out.add_edge(e.u, e.v, e.label);
    return out;
}

std::vector<LabeledGraph> augment_for_pipeline(const std::vector<LabeledGraph>& graphs,
                                               const InvariantSpec& spec) {
    std::vector<LabeledGraph> out;
    out.reserve(graphs.size());
    for (const LabeledGraph& g : graphs)
        out.push_back(squeeze_label_whitespace(augment_labels(g, spec)));
    return out;
}

struct CanonizeArgs {
    std::string input;
    std::string output;
    bool stats = false;
    bool skip_invalid = false;
    std::uint64_t frontier_cap = 1'000'000;
    int threads = 0;
};

void cmd_canonize(const CanonizeArgs& args) {
    auto policy = args.skip_invalid ? InvalidGraphPolicy::Skip : InvalidGraphPolicy::Strict;
    std::vector<LabeledGraph> graphs = parse_dataset(args.input, policy);

    std::size_t n = graphs.size();
    std::vector<DfsCode> codes(n);
    std::vector<CanonizeStats> stats(n);
    std::vector<std::string> failures(n);
    CanonizeOptions options;
    options.frontier_cap = static_cast<std::size_t>(args.frontier_cap);
    parallel_for(n, args.threads, [&](std::size_t i) {
        try {
            codes[i] = min_dfs_code(graphs[i], options, &stats[i]);
        } catch (const std::exception& e) {
            failures[i] = e.what();
        }
    });
    for (std::size_t i = 0; i < n; ++i)
        if (!failures[i].empty())
            throw std::runtime_error("graph " + std::to_string(i) + ": " + failures[i]);

    std::ofstream out(args.output, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output file '" + args.output + "'");
    for (const DfsCode& code : codes) out << code_to_text(code) << "\n";
    if (!out) throw std::runtime_error("write failed for '" + args.output + "'");

    if (args.stats)
        for (std::size_t i = 0; i < n; ++i)
            std::fprintf(stderr, "graph %zu: expansions=%llu peak_frontier=%zu\n", i,
                         static_cast<unsigned long long>(stats[i].expansions),
                         stats[i].peak_frontier);
    std::fprintf(stderr, "canonized %zu graphs\n", n);
}

struct TrainArgs {
    std::string config;
    std::string dataset;
    std::string output_dir;
    bool resume = false;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<int> epochs;
};

void write_vocab_file(const std::string& path, const VocabSpec& vocab) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    out << "dim_t " << vocab.dim_t << "\n";
    for (const std::string& label : vocab.node_labels) out << "node " << label << "\n";
    for (const std::string& label : vocab.edge_labels) out << "edge " << label << "\n";
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

void cmd_train(const TrainArgs& args) {
    RunConfig rc = args.config.empty() ? RunConfig{} : load_config(args.config);
    apply_env_overrides(rc);
    if (!args.dataset.empty()) rc.dataset = args.dataset;
    if (!args.output_dir.empty()) rc.output_dir = args.output_dir;

    TrainConfig tc = rc.model;
    if (args.seed) tc.seed = *args.seed;
    if (args.threads) tc.threads = *args.threads;
    if (args.epochs) tc.epochs = *args.epochs;

    std::vector<LabeledGraph> graphs = parse_dataset(rc.dataset);
    if (rc.augment.any()) graphs = augment_for_pipeline(graphs, rc.augment);
    DatasetSplit split = split_dataset(graphs, rc.ratios, rc.split_seed);
    std::fprintf(stderr, "dataset '%s': %zu graphs -> %zu train / %zu validation / %zu test\n",
                 rc.dataset.c_str(), graphs.size(), split.train.size(), split.validation.size(),
                 split.test.size());

    fs::create_directories(rc.output_dir);
    std::string ckpt_path = (fs::path(rc.output_dir) / "model.ckpt").string();

    TrainResult result;
    if (args.resume) {
        LoadedCheckpoint loaded = load_checkpoint(ckpt_path);
        if (!loaded.snapshot.has_value())
            throw std::runtime_error("checkpoint '" + ckpt_path +
                                     "' carries no training snapshot; cannot resume");
        TrainConfig stored = loaded.model.config;
        if (args.threads) stored.threads = *args.threads;
        if (args.epochs) stored.epochs = *args.epochs;
        std::fprintf(stderr, "resuming from epoch %d\n", loaded.snapshot->epochs_done);
        result = train_model(split.train, split.validation, stored, &*loaded.snapshot);
    } else {
        result = train_model(split.train, split.validation, tc);
    }

    save_checkpoint(ckpt_path, result.model, &result.snapshot);
    write_history_csv((fs::path(rc.output_dir) / "history.csv").string(), result.history);
    write_vocab_file((fs::path(rc.output_dir) / "vocab.txt").string(), result.model.vocab);

    std::fprintf(stderr, "trained %zu epochs%s; best validation loss %.17g at epoch %d\n",
                 result.history.size(), result.stopped_early ? " (stopped early)" : "",
                 result.best_valid_loss, result.best_epoch);
    std::fprintf(stderr, "wrote %s, history.csv, vocab.txt\n", ckpt_path.c_str());
}

struct GenerateArgs {
    std::string checkpoint;
    std::string output;
    std::optional<int> count;
    std::optional<int> max_len;
    std::uint64_t seed = 1;
    int threads = 0;
};

void cmd_generate(const GenerateArgs& args) {
    RunConfig rc;
    apply_env_overrides(rc);
    int count = args.count.value_or(rc.generate_count);
    int max_len = args.max_len.value_or(rc.generate_max_len);

    LoadedCheckpoint loaded = load_checkpoint(args.checkpoint);
    if (max_len <= 0) max_len = loaded.model.config.max_len;
    std::vector<LabeledGraph> graphs =
        generate_graphs(loaded.model, count, max_len, args.seed, args.threads);
    write_dataset(args.output, graphs);
    std::fprintf(stderr, "generated %d graphs -> %s\n", count, args.output.c_str());
}

struct EvaluateArgs {
    std::string generated;
    std::string reference;
    std::string training;
    std::string output_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<double> sigma;
    std::optional<int> batch_count;
    std::optional<int> batch_size;
    std::optional<int> nspdk_r;
    std::optional<int> nspdk_d;
    std::optional<std::uint64_t> iso_budget;
};

void cmd_evaluate(const EvaluateArgs& args) {
    RunConfig rc;
    apply_env_overrides(rc);
    EvalConfig ec = rc.metrics;
    if (args.seed) ec.seed = *args.seed;
    if (args.threads) ec.threads = *args.threads;
    if (args.sigma) ec.sigma = *args.sigma;
    if (args.batch_count) ec.batch_count = *args.batch_count;
    if (args.batch_size) ec.batch_size = *args.batch_size;
    if (args.nspdk_r) ec.nspdk.r_max = *args.nspdk_r;
    if (args.nspdk_d) ec.nspdk.d_max = *args.nspdk_d;
    if (args.iso_budget) ec.match.max_expansions = *args.iso_budget;

    std::vector<LabeledGraph> generated = parse_dataset(args.generated);
    std::vector<LabeledGraph> reference = parse_dataset(args.reference);
    std::vector<LabeledGraph> training = parse_dataset(args.training);

    MetricReport report = evaluate(generated, reference, training, ec);

    fs::create_directories(args.output_dir);
    auto spill = [](const std::string& path, const std::string& text) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!out) throw std::runtime_error("write failed for '" + path + "'");
    };
    std::string json_path = (fs::path(args.output_dir) / "report.json").string();
    std::string csv_path = (fs::path(args.output_dir) / "report.csv").string();
    spill(json_path, report_to_json(report));
    spill(csv_path, report_to_csv(report));

    if (report.iso_budget_hits > 0)
        std::fprintf(stderr,
                     "warning: %llu subgraph-isomorphism searches hit the expansion budget and "
                     "were counted as non-contained\n",
                     static_cast<unsigned long long>(report.iso_budget_hits));
    std::fprintf(stderr, "wrote %s and %s\n", json_path.c_str(), csv_path.c_str());
}

struct SampleArgs {
    std::string input;
    std::string output;
    int samples = 1;
    double restart = 0.15;
    int iterations = 150;
    std::uint64_t seed = 1;
    int threads = 0;
};

void cmd_sample_subgraphs(const SampleArgs& args) {
    std::vector<LabeledGraph> source = parse_dataset(args.input);
    if (source.size() != 1)
        throw std::runtime_error("input must contain exactly one source graph (got " +
                                 std::to_string(source.size()) + ")");
    RwrConfig cfg;
    cfg.restart_prob = args.restart;
    cfg.iterations = args.iterations;
    cfg.samples = args.samples;
    cfg.seed = args.seed;
    cfg.threads = args.threads;
    std::vector<LabeledGraph> samples = rwr_sample(source[0], cfg);
    write_dataset(args.output, samples);
    std::fprintf(stderr, "sampled %d subgraphs -> %s\n", args.samples, args.output.c_str());
}

struct AugmentArgs {
    std::string input;
    std::string output;
    bool degree = false;
    bool clustering = false;
    int decimals = 2;
};

void cmd_augment(const AugmentArgs& args) {
    std::vector<LabeledGraph> graphs = parse_dataset(args.input);
    InvariantSpec spec;
    spec.use_degree = args.degree;
    spec.use_clustering = args.clustering;
    spec.clustering_decimals = args.decimals;
    write_dataset(args.output, augment_for_pipeline(graphs, spec));
    std::fprintf(stderr, "augmented %zu graphs -> %s\n", graphs.size(), args.output.c_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"graphgen: generative graph modeling over minimum DFS codes"};
    app.require_subcommand(1);

    CanonizeArgs canonize_args;
    CLI::App* canonize = app.add_subcommand("canonize", "canonize graphs to minimum DFS codes");
    canonize->add_option("-i,--input", canonize_args.input, "dataset file")->required();
    canonize->add_option("-o,--output", canonize_args.output, "codes output file")->required();
    canonize->add_flag("--stats", canonize_args.stats, "print per-graph expansion counts");
    canonize->add_flag("--skip-invalid", canonize_args.skip_invalid,
                       "drop invalid graphs instead of failing");
    canonize->add_option("--frontier-cap", canonize_args.frontier_cap,
                         "search frontier size limit");
    canonize->add_option("--threads", canonize_args.threads, "worker threads (0 = all cores)");
    std::uint64_t canonize_seed = 0;
    canonize->add_option("--seed", canonize_seed,
                         "accepted for uniformity; canonization is deterministic");

    TrainArgs train_args;
    std::uint64_t train_seed = 0;
    int train_threads = 0;
    int train_epochs = 0;
    CLI::App* train = app.add_subcommand("train", "train the generative model");
    train->add_option("-c,--config", train_args.config, "config file");
    train->add_option("--dataset", train_args.dataset, "dataset file (overrides config)");
    train->add_option("--output-dir", train_args.output_dir, "output directory (overrides config)");
    train->add_flag("--resume", train_args.resume, "continue from the stored checkpoint");
    CLI::Option* ts = train->add_option("--seed", train_seed, "training seed");
    CLI::Option* tt = train->add_option("--threads", train_threads, "worker threads");
    CLI::Option* te = train->add_option("--epochs", train_epochs, "epoch budget");

    GenerateArgs generate_args;
    int generate_count = 0;
    int generate_max_len = 0;
    CLI::App* generate = app.add_subcommand("generate", "sample graphs from a checkpoint");
    generate->add_option("--checkpoint", generate_args.checkpoint, "model checkpoint")->required();
    generate->add_option("-o,--output", generate_args.output, "dataset output file")->required();
    CLI::Option* gn = generate->add_option("-n,--count", generate_count, "number of graphs");
    CLI::Option* gm = generate->add_option("--max-len", generate_max_len,
                                           "sequence length cap (0 = model default)");
    generate->add_option("--seed", generate_args.seed, "generation seed");
    generate->add_option("--threads", generate_args.threads, "worker threads");

    EvaluateArgs evaluate_args;
    std::uint64_t eval_seed = 0;
    int eval_threads = 0;
    double eval_sigma = 0.0;
    int eval_batch_count = 0;
    int eval_batch_size = 0;
    int eval_nspdk_r = 0;
    int eval_nspdk_d = 0;
    std::uint64_t eval_budget = 0;
    CLI::App* evaluate = app.add_subcommand("evaluate", "compare generated graphs to a reference");
    evaluate->add_option("--generated", evaluate_args.generated, "generated dataset")->required();
    evaluate->add_option("--reference", evaluate_args.reference, "reference dataset")->required();
    evaluate->add_option("--training", evaluate_args.training, "training dataset")->required();
    evaluate->add_option("--output-dir", evaluate_args.output_dir, "report directory");
    CLI::Option* es = evaluate->add_option("--seed", eval_seed, "batch sampling seed");
    CLI::Option* et = evaluate->add_option("--threads", eval_threads, "worker threads");
    CLI::Option* eg = evaluate->add_option("--sigma", eval_sigma, "MMD kernel bandwidth");
    CLI::Option* ec1 = evaluate->add_option("--batch-count", eval_batch_count, "comparison runs");
    CLI::Option* ec2 = evaluate->add_option("--batch-size", eval_batch_size, "graphs per run");
    CLI::Option* er = evaluate->add_option("--nspdk-r", eval_nspdk_r, "NSPDK radius limit");
    CLI::Option* ed = evaluate->add_option("--nspdk-d", eval_nspdk_d, "NSPDK distance limit");
    CLI::Option* eb =
        evaluate->add_option("--iso-budget", eval_budget, "subgraph search expansion budget");

    SampleArgs sample_args;
    CLI::App* sample = app.add_subcommand("sample-subgraphs",
                                          "random-walk-with-restart samples from one large graph");
    sample->add_option("-i,--input", sample_args.input, "single-graph dataset file")->required();
    sample->add_option("-o,--output", sample_args.output, "dataset output file")->required();
    sample->add_option("-n,--samples", sample_args.samples, "number of subgraphs")->required();
    sample->add_option("--restart", sample_args.restart, "restart probability");
    sample->add_option("--iterations", sample_args.iterations, "steps per walk");
    sample->add_option("--seed", sample_args.seed, "sampling seed");
    sample->add_option("--threads", sample_args.threads, "worker threads");

    AugmentArgs augment_args;
    CLI::App* augment = app.add_subcommand("augment", "prepend structural invariants to labels");
    augment->add_option("-i,--input", augment_args.input, "dataset file")->required();
    augment->add_option("-o,--output", augment_args.output, "dataset output file")->required();
    augment->add_flag("--degree", augment_args.degree, "prepend node degree");
    augment->add_flag("--clustering", augment_args.clustering,
                      "prepend quantized clustering coefficient");
    augment->add_option("--decimals", augment_args.decimals, "clustering quantization decimals");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }

    try {
        if (app.got_subcommand(canonize)) {
            cmd_canonize(canonize_args);
        } else if (app.got_subcommand(train)) {
            if (ts->count() > 0) train_args.seed = train_seed;
            if (tt->count() > 0) train_args.threads = train_threads;
            if (te->count() > 0) train_args.epochs = train_epochs;
            cmd_train(train_args);
        } else if (app.got_subcommand(generate)) {
            if (gn->count() > 0) generate_args.count = generate_count;
            if (gm->count() > 0) generate_args.max_len = generate_max_len;
            cmd_generate(generate_args);
        } else if (app.got_subcommand(evaluate)) {
            if (es->count() > 0) evaluate_args.seed = eval_seed;
            if (et->count() > 0) evaluate_args.threads = eval_threads;
            if (eg->count() > 0) evaluate_args.sigma = eval_sigma;
            if (ec1->count() > 0) evaluate_args.batch_count = eval_batch_count;
            if (ec2->count() > 0) evaluate_args.batch_size = eval_batch_size;
            if (er->count() > 0) evaluate_args.nspdk_r = eval_nspdk_r;
            if (ed->count() > 0) evaluate_args.nspdk_d = eval_nspdk_d;
            if (eb->count() > 0) evaluate_args.iso_budget = eval_budget;
            cmd_evaluate(evaluate_args);
        } else if (app.got_subcommand(sample)) {
            cmd_sample_subgraphs(sample_args);
        } else if (app.got_subcommand(augment)) {
            cmd_augment(augment_args);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
