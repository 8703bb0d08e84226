#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "graphgen/neural.hpp"
#include "graphgen/rng.hpp"

using namespace graphgen;

namespace {

NetConfig tiny_config(double dropout = 0.0) {
    NetConfig cfg;
    cfg.block_dims = {4, 4, 3, 3, 3};
    cfg.embedding_dim = 6;
    cfg.lstm_layers = 2;
    cfg.hidden_dim = 8;
    cfg.mlp_hidden = 10;
    cfg.dropout = dropout;
    return cfg;
}

std::vector<std::array<int, 5>> random_targets(Rng& rng, const NetConfig& cfg, int steps) {
    std::vector<std::array<int, 5>> out(steps);
    for (auto& step : out) {
        for (int c = 0; c < 5; ++c) {
            step[c] = static_cast<int>(rng.next_below(cfg.block_dims[c]));
        }
    }
    return out;
}

Net make_net(const NetConfig& cfg, std::uint64_t seed) {
    Net net(cfg);
    Rng rng(seed);
    net.init_params(rng);
    return net;
}

}  // namespace

TEST_CASE("network shapes follow the config") {
    NetConfig cfg = tiny_config();
    Net net(cfg);

    CHECK(cfg.input_k() == 17);
    CHECK(cfg.block_offsets() == std::array<int, 5>{0, 4, 8, 11, 14});
    CHECK(net.embedding.rows == 6);
    CHECK(net.embedding.cols == 17);
    REQUIRE(net.layers.size() == 2);
    CHECK(net.layers[0].wx.cols == 6);
    CHECK(net.layers[1].wx.cols == 8);
    CHECK(net.layers[0].wh.rows == 32);
    for (int c = 0; c < 5; ++c) {
        CHECK(net.heads[c].w2.rows == cfg.block_dims[c]);
        CHECK(net.heads[c].w1.cols == 8);
    }

    auto params = net.parameters();
    CHECK(params.size() == 1 + 2 * 3 + 5 * 4);
    std::set<std::string> names;
    for (auto& [name, mat] : params) names.insert(name);
    CHECK(names.count("embedding") == 1);
    CHECK(names.count("lstm0.wx") == 1);
    CHECK(names.count("lstm1.wh") == 1);
    CHECK(names.count("head.L_e.w2") == 1);
    CHECK(names.size() == params.size());
}

TEST_CASE("initialization bounds weights and opens the forget gate") {
    Net net = make_net(tiny_config(), 3);
    double bound = 1.0 / std::sqrt(17.0);
    for (double w : net.embedding.w) {
        CHECK(w <= bound);
        CHECK(w >= -bound);
    }
    const Mat& b = net.layers[0].b;
    for (int j = 0; j < 8; ++j) {
        CHECK(b.w[j] == 0.0);
        CHECK(b.w[8 + j] == 1.0);
        CHECK(b.w[16 + j] == 0.0);
        CHECK(b.w[24 + j] == 0.0);
    }
}

TEST_CASE("forward_step yields five proper distributions") {
    NetConfig cfg = tiny_config();
    Net net = make_net(cfg, 5);
    LstmState state = net.initial_state();

    auto probs = net.forward_step(state, StepInput::start());
    for (int c = 0; c < 5; ++c) {
        REQUIRE(static_cast<int>(probs[c].size()) == cfg.block_dims[c]);
        double sum = 0.0;
        for (double p : probs[c]) {
            CHECK(p > 0.0);
            sum += p;
        }
        CHECK(sum == doctest::Approx(1.0));
    }

    // feeding input moves the state
    auto probs2 = net.forward_step(state, StepInput::of({1, 2, 0, 1, 2}));
    bool moved = false;
    for (int c = 0; c < 5 && !moved; ++c) {
        for (std::size_t j = 0; j < probs[c].size(); ++j) {
            if (std::abs(probs[c][j] - probs2[c][j]) > 1e-12) {
                moved = true;
                break;
            }
        }
    }
    CHECK(moved);
}

TEST_CASE("forward passes are deterministic") {
    NetConfig cfg = tiny_config();
    Rng data_rng(9);
    auto targets = random_targets(data_rng, cfg, 5);

    Net a = make_net(cfg, 42);
    Net b = make_net(cfg, 42);
    CHECK(a.sequence_loss(targets) == b.sequence_loss(targets));

    Rng drop_a(7), drop_b(7);
    CHECK(a.accumulate_gradients(targets, drop_a) == b.accumulate_gradients(targets, drop_b));
    for (std::size_t p = 0; p < a.parameters().size(); ++p) {
        CHECK(a.parameters()[p].second->g == b.parameters()[p].second->g);
    }
}

TEST_CASE("gradient-free and gradient-accumulating losses agree without dropout") {
    NetConfig cfg = tiny_config(0.0);
    Net net = make_net(cfg, 11);
    Rng data_rng(13);
    auto targets = random_targets(data_rng, cfg, 6);

    Rng drop(1);
    double train_loss = net.accumulate_gradients(targets, drop);
    CHECK(train_loss == doctest::Approx(net.sequence_loss(targets)).epsilon(1e-12));
    CHECK(net.grad_norm() > 0.0);
}

TEST_CASE("analytic gradients match finite differences everywhere") {
    NetConfig cfg = tiny_config(0.2);  // the probe drops dropout internally
    Net net = make_net(cfg, 17);
    Rng data_rng(19);
    auto targets = random_targets(data_rng, cfg, 6);

    // A freshly initialized net is a degenerate probe point: zero biases and
    // the zero start vector park every ReLU exactly on its kink, where the
    // one-sided numeric slope legitimately disagrees with the subgradient.
    // A few optimizer steps move the check to a generic point.
    AdamState warmup;
    warmup.attach(net);
    Rng drop(3);
    for (int iter = 0; iter < 3; ++iter) {
        net.zero_grads();
        net.accumulate_gradients(targets, drop);
        warmup.apply(net);
    }
    net.zero_grads();

    FdReport report = finite_difference_check(net, targets, 8, 1e-4, 123);
    INFO("max relative error ", report.max_rel_err);
    CHECK(report.pass);
    CHECK(report.max_rel_err <= 1e-4);

    // every parameter tensor is probed: embedding, all gate matrices and
    // biases, and all five heads
    CHECK(report.per_param.size() == net.parameters().size());
    std::set<std::string> probed;
    for (const FdEntry& e : report.per_param) probed.insert(e.param);
    for (const char* required : {"embedding", "lstm0.wx", "lstm0.wh", "lstm0.b", "lstm1.wx",
                                 "head.t_u.w1", "head.t_v.w2", "head.L_u.b1", "head.L_e.w2",
                                 "head.L_v.b2"}) {
        CHECK(probed.count(required) == 1);
    }
}

TEST_CASE("gradients flow into the embedding only for used columns") {
    NetConfig cfg = tiny_config(0.0);
    Net net = make_net(cfg, 23);
    std::vector<std::array<int, 5>> targets = {{0, 1, 0, 0, 0}, {2, 3, 1, 1, 1}};

    Rng drop(1);
    net.zero_grads();
    net.accumulate_gradients(targets, drop);

    // the input at step 1 is targets[0]; its five columns are 0, 4+1, 8+0,
    // 11+0, 14+0; targets[1] is never fed back
    auto offsets = cfg.block_offsets();
    std::set<int> used = {offsets[0] + 0, offsets[1] + 1, offsets[2] + 0, offsets[3] + 0,
                          offsets[4] + 0};
    for (int col = 0; col < cfg.input_k(); ++col) {
        double mass = 0.0;
        for (int r = 0; r < cfg.embedding_dim; ++r) {
            mass += std::abs(net.embedding.grad_at(r, col));
        }
        if (used.count(col)) {
            CHECK(mass > 0.0);
        } else {
            CHECK(mass == 0.0);
        }
    }
}

TEST_CASE("dropout masks are drawn from the provided stream") {
    NetConfig cfg = tiny_config(0.5);
    Net net = make_net(cfg, 29);
    Rng data_rng(31);
    auto targets = random_targets(data_rng, cfg, 5);

    Rng drop1(100), drop2(100), drop3(999);
    Net a = net, b = net, c = net;
    double la = a.accumulate_gradients(targets, drop1);
    double lb = b.accumulate_gradients(targets, drop2);
    double lc = c.accumulate_gradients(targets, drop3);
    CHECK(la == lb);
    CHECK(la != lc);
}

TEST_CASE("adam drives the loss down on a fixed sequence") {
    NetConfig cfg = tiny_config(0.0);
    cfg.lstm_layers = 1;
    Net net = make_net(cfg, 37);
    Rng data_rng(41);
    auto targets = random_targets(data_rng, cfg, 4);

    AdamConfig acfg;
    acfg.lr = 5e-3;
    AdamState adam(acfg);
    adam.attach(net);

    double first = net.sequence_loss(targets);
    Rng drop(1);
    for (int iter = 0; iter < 60; ++iter) {
        net.zero_grads();
        net.accumulate_gradients(targets, drop);
        adam.apply(net);
    }
    double last = net.sequence_loss(targets);
    CHECK(last < 0.5 * first);
}

TEST_CASE("gradient clipping caps the applied step") {
    NetConfig cfg = tiny_config(0.0);
    Net net = make_net(cfg, 43);
    Rng data_rng(47);
    auto targets = random_targets(data_rng, cfg, 4);

    Rng drop(1);
    net.zero_grads();
    net.accumulate_gradients(targets, drop);
    double raw_norm = net.grad_norm();
    REQUIRE(raw_norm > 0.01);

    net.scale_grads(0.5);
    CHECK(net.grad_norm() == doctest::Approx(0.5 * raw_norm));

    net.zero_grads();
    CHECK(net.grad_norm() == 0.0);
}

TEST_CASE("identically seeded training runs produce identical weights") {
    NetConfig cfg = tiny_config(0.3);
    Rng data_rng(53);
    auto targets = random_targets(data_rng, cfg, 5);

    auto train = [&](Net net) {
        AdamState adam;
        adam.attach(net);
        Rng drop(77);
        for (int iter = 0; iter < 5; ++iter) {
            net.zero_grads();
            net.accumulate_gradients(targets, drop);
            adam.apply(net);
        }
        return net;
    };

    Net a = train(make_net(cfg, 59));
    Net b = train(make_net(cfg, 59));
    for (std::size_t p = 0; p < a.parameters().size(); ++p) {
        CHECK(a.parameters()[p].second->w == b.parameters()[p].second->w);
    }
}
