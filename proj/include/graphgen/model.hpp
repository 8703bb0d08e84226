#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "graphgen/codec.hpp"
#include "graphgen/dfs_code.hpp"
#include "graphgen/graph.hpp"
#include "graphgen/neural.hpp"
#include "graphgen/rng.hpp"

namespace graphgen {

/*
 * Training hyperparameters. The defaults are the full-size profile; the desk
 * profile is a small network that overfits toy datasets in seconds and is
 * what the command line uses unless told otherwise.
 *
 * max_len caps how many edge tuples generation may emit. Zero means "resolve
 * at training time" to the longest training code plus one.
 */
struct TrainConfig {
    int epochs = 400;
    int batch_size = 32;
    int lstm_layers = 4;
    int hidden_dim = 256;
    int embedding_dim = 92;
    int mlp_hidden = 512;
    double dropout = 0.2;
    AdamConfig optimizer;

    // Stop once the relative change of the validation loss stays below
    // early_stop_rel_change for early_stop_patience consecutive epochs.
    double early_stop_rel_change = 5e-4;
    int early_stop_patience = 20;

    int max_len = 0;
    std::uint64_t seed = 1;

    // Thread count for the parallel phases (canonization, encoding,
    // generation). Optimizer steps are always serial. <= 0 uses all cores.
    int threads = 0;

    static TrainConfig desk_profile();
};

struct EpochStats {
    int epoch = 0;
    double train_loss = 0.0;
    double valid_loss = 0.0;
};

/*
 * Everything needed to continue an interrupted training run bit-for-bit:
 * counters for the early-stop rule, optimizer moments, the last-epoch
 * parameters (training continues from these) and the best-so-far parameters
 * (what the finished run ultimately returns). Parameter vectors follow
 * Net::parameters() order.
 */
struct TrainingSnapshot {
    int epochs_done = 0;
    int best_epoch = -1;
    double best_valid_loss = 0.0;
    double prev_valid_loss = 0.0;
    int stall_streak = 0;
    AdamState adam;
    std::vector<std::vector<double>> final_params;
    std::vector<std::vector<double>> best_params;
    std::vector<EpochStats> history;
};

/*
 * A trained generator: the vocabulary the sequences were encoded with, the
 * resolved training configuration and the network parameters. `seed` records
 * the seed the model was trained with.
 */
struct GenerativeModel {
    VocabSpec vocab;
    TrainConfig config;
    Net net;
    std::uint64_t seed = 0;
};

// Network shape implied by a training configuration and a vocabulary.
NetConfig net_config_for(const TrainConfig& cfg, const VocabSpec& vocab);

struct TrainResult {
    GenerativeModel model;  // parameters of the lowest-validation-loss epoch
    std::vector<EpochStats> history;
    int best_epoch = -1;
    double best_valid_loss = 0.0;
    bool stopped_early = false;
    TrainingSnapshot snapshot;
};

/*
 * Canonizes both sets, builds the vocabulary from the training set, then
 * teacher-forces the network on the encoded codes: every epoch shuffles the
 * training sequences, accumulates gradients over each mini-batch, averages
 * them and takes one optimizer step. The epoch's mean training loss and the
 * mean validation loss (dropout off) are appended to the history.
 *
 * All per-epoch randomness (shuffle order, dropout masks) is derived
 * statelessly from (cfg.seed, epoch), so resuming from a snapshot reproduces
 * the uninterrupted run exactly.
 *
 * Throws std::invalid_argument on empty input sets or nonsensical
 * hyperparameters, std::out_of_range when a validation graph does not fit
 * the training vocabulary, and propagates canonization errors.
 */
TrainResult train_model(const std::vector<LabeledGraph>& train_set,
                        const std::vector<LabeledGraph>& valid_set, const TrainConfig& cfg,
                        const TrainingSnapshot* resume = nullptr);

/*
 * Autoregressive sampling: starting from the start-of-sequence input, each
 * step samples all five components from their softmax distributions, stops
 * as soon as any component draws its end-of-sequence index, and otherwise
 * appends the decoded tuple and feeds the step back in. Emits at most
 * max_len tuples; max_len 0 returns an empty code.
 */
DfsCode generate_sequence(const GenerativeModel& model, int max_len, Rng& rng);

// Thrown when generation keeps producing empty sequences and the resample
// budget (10x the requested count) runs out.
class ResampleCapExceeded : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/*
 * Samples `count` sequences, decodes each leniently (self edges and other
 * malformed tuples dropped, then the maximum connected component) and
 * returns the resulting graphs. Sequences that end before their first tuple
 * are discarded and resampled. Sampling streams are derived from
 * (seed, attempt index), so results do not depend on the thread count.
 * max_len <= 0 uses the model's trained cap.
 */
std::vector<LabeledGraph> generate_graphs(const GenerativeModel& model, int count, int max_len,
                                          std::uint64_t seed, int threads = 0);

/*
 * Teacher-forced argmax accuracy over a set of graphs: canonizes and encodes
 * each graph, feeds the ground-truth prefix, and scores each of the five
 * components of every step (terminal end-of-sequence step included) as one
 * prediction. Returns the fraction of correct predictions.
 */
double teacher_forced_accuracy(const GenerativeModel& model,
                               const std::vector<LabeledGraph>& graphs, int threads = 0);

class CheckpointIoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class CheckpointVersionMismatch : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class CheckpointChecksumMismatch : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/*
 * Binary checkpoint: magic + format version, vocabulary tables, training
 * configuration, named parameter tensors as little-endian doubles with shape
 * headers, the optional training snapshot, and a trailing FNV-1a checksum
 * over everything before it. Round-trips are bit-exact.
 */
void save_checkpoint(const std::string& path, const GenerativeModel& model,
                     const TrainingSnapshot* snapshot = nullptr);

struct LoadedCheckpoint {
    GenerativeModel model;
    std::optional<TrainingSnapshot> snapshot;
};

LoadedCheckpoint load_checkpoint(const std::string& path);

// "epoch,train_loss,valid_loss" rows; losses printed with %.17g so reruns
// are byte-identical.
void write_history_csv(const std::string& path, const std::vector<EpochStats>& history);

}  // namespace graphgen
