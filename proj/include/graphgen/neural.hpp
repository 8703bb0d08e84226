#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "graphgen/rng.hpp"

namespace graphgen {

// Dense row-major parameter matrix with a gradient buffer of the same shape.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> w;
    std::vector<double> g;

    Mat() = default;
    Mat(int r, int c)
        : rows(r),
          cols(c),
          w(static_cast<std::size_t>(r) * c, 0.0),
          g(static_cast<std::size_t>(r) * c, 0.0) {}

    double& at(int r, int c) { return w[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return w[static_cast<std::size_t>(r) * cols + c]; }
    double& grad_at(int r, int c) { return g[static_cast<std::size_t>(r) * cols + c]; }

    std::size_t size() const { return w.size(); }
    void zero_grad() { std::fill(g.begin(), g.end(), 0.0); }
};

/**
 * Shape of the sequence model.
 *
 * A step is five categorical components drawn from blocks of sizes
 * block_dims (tuple order: t_u, t_v, L_u, L_e, L_v); their concatenated
 * one-hot width is input_k(). The network embeds a step linearly (no bias),
 * runs a stacked LSTM, and decodes the next step through five independent
 * two-layer softmax heads, one per component.
 */
struct NetConfig {
    std::array<int, 5> block_dims{};
    int embedding_dim = 92;
    int lstm_layers = 4;
    int hidden_dim = 256;
    int mlp_hidden = 512;
    double dropout = 0.2;

    int input_k() const {
        int k = 0;
        for (int d : block_dims) k += d;
        return k;
    }

    std::array<int, 5> block_offsets() const {
        std::array<int, 5> off{};
        int run = 0;
        for (int c = 0; c < 5; ++c) {
            off[c] = run;
            run += block_dims[c];
        }
        return off;
    }
};

// One step of input: five block-local indices, or the all-zeros
// start-of-sequence vector.
struct StepInput {
    bool sos = false;
    std::array<int, 5> idx{};

    static StepInput start() { return {true, {}}; }
    static StepInput of(const std::array<int, 5>& idx) { return {false, idx}; }
};

struct LstmState {
    std::vector<std::vector<double>> h;
    std::vector<std::vector<double>> c;
};

struct LstmLayer {
    Mat wx;  // 4*hidden x input
    Mat wh;  // 4*hidden x hidden
    Mat b;   // 4*hidden x 1; gate order [input, forget, cell, output]
};

struct MlpHead {
    Mat w1;  // mlp_hidden x hidden
    Mat b1;
    Mat w2;  // block_dim x mlp_hidden
    Mat b2;
};

/**
 * The autoregressive network: linear embedding (sum of one-hot columns),
 * stacked LSTM, five softmax heads.
 *
 * Gradients are hand-derived BPTT accumulated into Mat::g. Training-mode
 * passes apply inverted dropout to each LSTM layer's output except the last;
 * evaluation passes are deterministic.
 */
struct Net {
    NetConfig cfg;
    Mat embedding;  // embedding_dim x input_k
    std::vector<LstmLayer> layers;
    std::array<MlpHead, 5> heads;

    Net() = default;
    explicit Net(const NetConfig& config);

    // Uniform(-1/sqrt(fan_in), +1/sqrt(fan_in)) on weights, zero biases
    // except the forget-gate slice at 1.0.
    void init_params(Rng& rng);

    // Stable named parameter enumeration (checkpoint + optimizer order).
    std::vector<std::pair<std::string, Mat*>> parameters();
    std::vector<std::pair<std::string, const Mat*>> parameters() const;

    LstmState initial_state() const;

    // One evaluation-mode step: advances state, returns the five head
    // distributions over the next components.
    std::array<std::vector<double>, 5> forward_step(LstmState& state, const StepInput& in) const;

    /**
     * Summed elementwise binary cross-entropy of a teacher-forced pass over
     * one sequence. targets[m] supplies both the label for step m and the
     * input for step m+1; the input at step 0 is the start symbol.
     * Probabilities are clamped to [1e-7, 1 - 1e-7] inside the loss.
     */
    double sequence_loss(const std::vector<std::array<int, 5>>& targets) const;

    // Training-mode forward + backward for one sequence; accumulates
    // gradients into the parameter buffers and returns the loss.
    double accumulate_gradients(const std::vector<std::array<int, 5>>& targets, Rng& dropout_rng);

    void zero_grads();
    void scale_grads(double factor);
    double grad_norm() const;
};

/**
 * Adam with global-norm gradient clipping and decoupled weight decay:
 * gradients are clipped to clip_norm first, moments updated, then
 * w -= lr * (m_hat / (sqrt(v_hat) + eps) + weight_decay * w).
 */
struct AdamConfig {
    double lr = 3e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 1e-5;
    double clip_norm = 1.0;
};

struct AdamState {
    AdamConfig cfg;
    std::int64_t step = 0;
    std::vector<std::vector<double>> m;
    std::vector<std::vector<double>> v;

    explicit AdamState(const AdamConfig& config = {}) : cfg(config) {}

    // Sizes the moment buffers for a network (idempotent on matching shapes).
    void attach(const Net& net);

    // One update from the accumulated gradients; does not zero them.
    void apply(Net& net);
};

struct FdEntry {
    std::string param;
    double max_rel_err = 0.0;
};

struct FdReport {
    bool pass = false;
    double max_rel_err = 0.0;
    double tolerance = 0.0;
    std::vector<FdEntry> per_param;
};

/**
 * Central-difference gradient check on a dropout-free copy of the network:
 * every parameter tensor is probed at sampled entries and compared against
 * the analytic BPTT gradient. Relative error uses
 * |num - ana| / max(1, |num| + |ana|).
 */
FdReport finite_difference_check(const Net& net, const std::vector<std::array<int, 5>>& targets,
                                 int samples_per_param, double tolerance, std::uint64_t seed);

}  // namespace graphgen
