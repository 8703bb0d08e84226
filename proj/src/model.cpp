#include "graphgen/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "graphgen/parallel.hpp"

namespace graphgen {

namespace {

// Stream index for parameter initialization; epochs use 2*epoch (shuffle)
// and 2*epoch + 1 (dropout), which stay far below this.
constexpr std::uint64_t kInitStream = 0xFFFFFFFFFFFFFFFFull;

void validate_config(const TrainConfig& cfg) {
    if (cfg.epochs < 1) throw std::invalid_argument("train: epochs must be positive");
    if (cfg.batch_size < 1) throw std::invalid_argument("train: batch size must be positive");
    if (cfg.lstm_layers < 1 || cfg.hidden_dim < 1 || cfg.embedding_dim < 1 || cfg.mlp_hidden < 1)
        throw std::invalid_argument("train: network dimensions must be positive");
    if (!(cfg.dropout >= 0.0) || cfg.dropout >= 1.0)
        throw std::invalid_argument("train: dropout must lie in [0, 1)");
    if (!(cfg.optimizer.lr > 0.0)) throw std::invalid_argument("train: learning rate must be positive");
    if (!(cfg.early_stop_rel_change > 0.0) || cfg.early_stop_rel_change >= 1.0)
        throw std::invalid_argument("train: early-stop threshold must lie in (0, 1)");
    if (cfg.early_stop_patience < 1)
        throw std::invalid_argument("train: early-stop patience must be positive");
    if (cfg.max_len < 0) throw std::invalid_argument("train: max_len must be non-negative");
}

std::vector<std::array<int, 5>> to_targets(const EncodedSequence& seq) {
    std::vector<std::array<int, 5>> targets;
    targets.reserve(seq.steps.size());
    for (const EncodedStep& s : seq.steps) targets.push_back({s.t_u, s.t_v, s.l_u, s.l_e, s.l_v});
    return targets;
}

std::vector<std::vector<std::array<int, 5>>> encode_all(const std::vector<DfsCode>& codes,
                                                        const VocabSpec& vocab, int threads) {
    std::vector<std::vector<std::array<int, 5>>> out(codes.size());
    parallel_for(codes.size(), threads,
                 [&](std::size_t i) { out[i] = to_targets(encode_sequence(codes[i], vocab)); });
    return out;
}

std::vector<std::vector<double>> snapshot_params(const Net& net) {
    std::vector<std::vector<double>> out;
    for (const auto& [name, mat] : net.parameters()) out.push_back(mat->w);
    return out;
}

void restore_params(Net& net, const std::vector<std::vector<double>>& params, const char* what) {
    auto live = net.parameters();
    if (live.size() != params.size())
        throw std::invalid_argument(std::string(what) + ": parameter count mismatch");
    for (std::size_t i = 0; i < live.size(); ++i) {
        if (live[i].second->w.size() != params[i].size())
            throw std::invalid_argument(std::string(what) + ": parameter shape mismatch for " +
                                        live[i].first);
        live[i].second->w = params[i];
    }
}

int sample_index(const std::vector<double>& probs, Rng& rng) {
    double u = rng.next_double();
    double cum = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        cum += probs[i];
        if (u < cum) return static_cast<int>(i);
    }
    return static_cast<int>(probs.size()) - 1;
}

int argmax_index(const std::vector<double>& probs) {
    return static_cast<int>(std::max_element(probs.begin(), probs.end()) - probs.begin());
}

}  // namespace

NetConfig net_config_for(const TrainConfig& cfg, const VocabSpec& vocab) {
    NetConfig nc;
    nc.block_dims = {vocab.dim_t, vocab.dim_t, vocab.dim_node(), vocab.dim_edge(),
                     vocab.dim_node()};
    nc.embedding_dim = cfg.embedding_dim;
    nc.lstm_layers = cfg.lstm_layers;
    nc.hidden_dim = cfg.hidden_dim;
    nc.mlp_hidden = cfg.mlp_hidden;
    nc.dropout = cfg.dropout;
    return nc;
}

TrainConfig TrainConfig::desk_profile() {
    TrainConfig cfg;
    cfg.epochs = 300;
    cfg.lstm_layers = 2;
    cfg.hidden_dim = 64;
    cfg.embedding_dim = 32;
    cfg.mlp_hidden = 128;
    // Small datasets are overfitting workloads; regularization only slows
    // them down.
    cfg.dropout = 0.0;
    return cfg;
}

TrainResult train_model(const std::vector<LabeledGraph>& train_set,
                        const std::vector<LabeledGraph>& valid_set, const TrainConfig& cfg,
                        const TrainingSnapshot* resume) {
    validate_config(cfg);
    if (train_set.empty()) throw std::invalid_argument("train: empty training set");
    if (valid_set.empty()) throw std::invalid_argument("train: empty validation set");

    std::vector<DfsCode> train_codes = canonize_all(train_set, cfg.threads);
    std::vector<DfsCode> valid_codes = canonize_all(valid_set, cfg.threads);

    VocabSpec vocab = build_vocab(train_set);
    auto train_targets = encode_all(train_codes, vocab, cfg.threads);
    auto valid_targets = encode_all(valid_codes, vocab, cfg.threads);

    TrainConfig resolved = cfg;
    if (resolved.max_len == 0) {
        std::size_t longest = 0;
        for (const DfsCode& code : train_codes) longest = std::max(longest, code.size());
        resolved.max_len = static_cast<int>(longest) + 1;
    }

    GenerativeModel model;
    model.vocab = vocab;
    model.config = resolved;
    model.seed = cfg.seed;
    model.net = Net(net_config_for(resolved, vocab));

    AdamState adam(cfg.optimizer);
    int start_epoch = 0;
    int best_epoch = -1;
    int streak = 0;
    double best_valid = std::numeric_limits<double>::infinity();
    double prev_valid = 0.0;
    bool has_prev = false;
    std::vector<EpochStats> history;
    std::vector<std::vector<double>> best_params;

    if (resume != nullptr) {
        restore_params(model.net, resume->final_params, "resume");
        adam = resume->adam;
        adam.attach(model.net);
        start_epoch = resume->epochs_done;
        best_epoch = resume->best_epoch;
        best_valid = resume->best_valid_loss;
        prev_valid = resume->prev_valid_loss;
        has_prev = resume->epochs_done > 0;
        streak = resume->stall_streak;
        history = resume->history;
        best_params = resume->best_params;
    } else {
        Rng init_rng = Rng::derived(cfg.seed, kInitStream);
        model.net.init_params(init_rng);
        adam.attach(model.net);
    }

    const std::size_t n_train = train_targets.size();
    const std::size_t n_valid = valid_targets.size();
    std::vector<std::size_t> order(n_train);
    std::vector<double> valid_slots(n_valid);
    bool stopped_early = false;
    int epochs_done = start_epoch;

    for (int epoch = start_epoch; epoch < cfg.epochs; ++epoch) {
        Rng shuffle_rng = Rng::derived(cfg.seed, 2 * static_cast<std::uint64_t>(epoch));
        Rng dropout_rng = Rng::derived(cfg.seed, 2 * static_cast<std::uint64_t>(epoch) + 1);
        std::iota(order.begin(), order.end(), std::size_t{0});
        shuffle(order, shuffle_rng);

        double train_sum = 0.0;
        for (std::size_t at = 0; at < n_train; at += static_cast<std::size_t>(cfg.batch_size)) {
            std::size_t end = std::min(at + static_cast<std::size_t>(cfg.batch_size), n_train);
            model.net.zero_grads();
            for (std::size_t i = at; i < end; ++i)
                train_sum += model.net.accumulate_gradients(train_targets[order[i]], dropout_rng);
            model.net.scale_grads(1.0 / static_cast<double>(end - at));
            adam.apply(model.net);
        }
        double train_loss = train_sum / static_cast<double>(n_train);

        // Frozen parameters; each worker only owns its private LSTM state.
        parallel_for(n_valid, cfg.threads, [&](std::size_t i) {
            valid_slots[i] = model.net.sequence_loss(valid_targets[i]);
        });
        double valid_loss =
            std::accumulate(valid_slots.begin(), valid_slots.end(), 0.0) / static_cast<double>(n_valid);

        history.push_back({epoch, train_loss, valid_loss});
        epochs_done = epoch + 1;

        if (valid_loss < best_valid) {
            best_valid = valid_loss;
            best_epoch = epoch;
            best_params = snapshot_params(model.net);
        }

        if (has_prev) {
            double denom = std::max(std::abs(prev_valid), 1e-12);
            if (std::abs(valid_loss - prev_valid) / denom < cfg.early_stop_rel_change)
                ++streak;
            else
                streak = 0;
        }
        prev_valid = valid_loss;
        has_prev = true;

        if (streak >= cfg.early_stop_patience) {
            stopped_early = true;
            break;
        }
    }

    TrainResult result;
    result.snapshot.epochs_done = epochs_done;
    result.snapshot.best_epoch = best_epoch;
    result.snapshot.best_valid_loss = best_valid;
    result.snapshot.prev_valid_loss = prev_valid;
    result.snapshot.stall_streak = streak;
    result.snapshot.adam = adam;
    result.snapshot.final_params = snapshot_params(model.net);
    result.snapshot.best_params = best_params;
    result.snapshot.history = history;

    if (!best_params.empty()) restore_params(model.net, best_params, "train");
    result.model = std::move(model);
    result.history = std::move(history);
    result.best_epoch = best_epoch;
    result.best_valid_loss = best_valid;
    result.stopped_early = stopped_early;
    return result;
}

DfsCode generate_sequence(const GenerativeModel& model, int max_len, Rng& rng) {
    DfsCode code;
    if (max_len <= 0) return code;

    LstmState state = model.net.initial_state();
    StepInput in = StepInput::start();
    for (int step = 0; step < max_len; ++step) {
        std::array<std::vector<double>, 5> theta = model.net.forward_step(state, in);
        EncodedStep s;
        s.t_u = sample_index(theta[0], rng);
        s.t_v = sample_index(theta[1], rng);
        s.l_u = sample_index(theta[2], rng);
        s.l_e = sample_index(theta[3], rng);
        s.l_v = sample_index(theta[4], rng);
        std::optional<EdgeTuple> tuple = decode_step(s, model.vocab);
        if (!tuple.has_value()) break;  // some component drew end-of-sequence
        code.tuples.push_back(*tuple);
        in = StepInput::of({s.t_u, s.t_v, s.l_u, s.l_e, s.l_v});
    }
    return code;
}

std::vector<LabeledGraph> generate_graphs(const GenerativeModel& model, int count, int max_len,
                                          std::uint64_t seed, int threads) {
    if (count < 1) throw std::invalid_argument("generate: count must be positive");
    int cap = max_len > 0 ? max_len : model.config.max_len;

    const std::uint64_t budget = 10ull * static_cast<std::uint64_t>(count);
    std::vector<LabeledGraph> out;
    out.reserve(static_cast<std::size_t>(count));
    std::uint64_t attempt = 0;

    while (out.size() < static_cast<std::size_t>(count) && attempt < budget) {
        std::uint64_t need = static_cast<std::uint64_t>(count) - out.size();
        std::uint64_t wave = std::min(budget - attempt, need);
        std::vector<DfsCode> codes(wave);
        parallel_for(static_cast<std::size_t>(wave), threads, [&](std::size_t i) {
            Rng rng = Rng::derived(seed, attempt + i);
            codes[i] = generate_sequence(model, cap, rng);
        });
        attempt += wave;
        for (const DfsCode& code : codes) {
            if (code.empty()) continue;  // immediate end-of-sequence: resample
            if (out.size() < static_cast<std::size_t>(count))
                out.push_back(decode(code, DecodeMode::Lenient));
        }
    }

    if (out.size() < static_cast<std::size_t>(count))
        throw ResampleCapExceeded("generate: resample cap exceeded, model keeps sampling empty sequences");
    return out;
}

double teacher_forced_accuracy(const GenerativeModel& model,
                               const std::vector<LabeledGraph>& graphs, int threads) {
    if (graphs.empty()) throw std::invalid_argument("accuracy: empty graph set");

    std::vector<DfsCode> codes = canonize_all(graphs, threads);
    auto targets = encode_all(codes, model.vocab, threads);

    std::vector<std::uint64_t> correct(targets.size(), 0);
    std::vector<std::uint64_t> total(targets.size(), 0);
    parallel_for(targets.size(), threads, [&](std::size_t i) {
        LstmState state = model.net.initial_state();
        StepInput in = StepInput::start();
        for (const std::array<int, 5>& step : targets[i]) {
            std::array<std::vector<double>, 5> theta = model.net.forward_step(state, in);
            for (int c = 0; c < 5; ++c) {
                if (argmax_index(theta[c]) == step[c]) ++correct[i];
                ++total[i];
            }
            in = StepInput::of(step);
        }
    });

    std::uint64_t hits = std::accumulate(correct.begin(), correct.end(), std::uint64_t{0});
    std::uint64_t all = std::accumulate(total.begin(), total.end(), std::uint64_t{0});
    return static_cast<double>(hits) / static_cast<double>(all);
}

void write_history_csv(const std::string& path, const std::vector<EpochStats>& history) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("history: cannot open " + path + " for writing");
    out << "epoch,train_loss,valid_loss\n";
    char line[128];
    for (const EpochStats& row : history) {
        std::snprintf(line, sizeof line, "%d,%.17g,%.17g\n", row.epoch, row.train_loss,
                      row.valid_loss);
        out << line;
    }
    if (!out) throw std::runtime_error("history: write to " + path + " failed");
}

}  // namespace graphgen
