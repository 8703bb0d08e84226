#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include "graphgen/datagen.hpp"
#include "graphgen/graph.hpp"
#include "graphgen/metrics.hpp"
#include "graphgen/model.hpp"

namespace graphgen {

/*
 * Experiment configuration: flat "key = value" lines under [section]
 * headers, no nesting. Every field has a default, so an empty config runs
 * the desk profile end to end. Full-line comments start with '#'.
 *
 * Sections and keys:
 *
 *   [data]     dataset, train_ratio, validation_ratio, test_ratio, split_seed
 *   [augment]  use_degree, use_clustering, clustering_decimals
 *   [model]    epochs, batch_size, lstm_layers, hidden_dim, embedding_dim,
 *              mlp_hidden, dropout, learning_rate, weight_decay, clip_norm,
 *              early_stop_rel_change, early_stop_patience, max_len, seed,
 *              threads
 *   [generate] count, max_len
 *   [metrics]  batch_count, batch_size, sigma, nspdk_r_max, nspdk_d_max,
 *              iso_budget, seed
 *   [output]   dir
 *
 * Every key can be overridden by an environment variable named
 * GRAPHGEN_<SECTION>_<KEY> in upper case, e.g. GRAPHGEN_MODEL_HIDDEN_DIM.
 */
struct RunConfig {
    std::string dataset = "data/tiny.txt";
    SplitRatios ratios;
    std::uint64_t split_seed = 1;

    InvariantSpec augment;

    TrainConfig model = TrainConfig::desk_profile();

    int generate_count = 2560;
    int generate_max_len = 0;  // 0: whatever the trained model allows

    EvalConfig metrics;

    std::string output_dir = "out";
};

class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parses config text; unknown sections or keys and malformed values are
// ConfigErrors naming the offending line.
RunConfig parse_config_text(const std::string& text);

// Reads and parses a config file; a missing file is a ConfigError.
RunConfig load_config(const std::string& path);

// Applies overrides given as full environment-variable names
// (GRAPHGEN_SECTION_KEY -> value). Unknown names are ignored, bad values
// are ConfigErrors.
void apply_overrides(RunConfig& cfg, const std::map<std::string, std::string>& env);

// Same, reading the process environment.
void apply_env_overrides(RunConfig& cfg);

// Renders the full configuration in the file format; parses back to an
// equivalent RunConfig.
std::string config_to_text(const RunConfig& cfg);

}  // namespace graphgen
