#include "graphgen/neural.hpp"

#include <cmath>
#include <stdexcept>

namespace graphgen {

namespace {

constexpr double kProbClamp = 1e-7;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// out = m * x (+ out when accumulate)
void matvec(const Mat& m, const std::vector<double>& x, std::vector<double>& out,
            bool accumulate) {
    if (!accumulate) out.assign(m.rows, 0.0);
    for (int r = 0; r < m.rows; ++r) {
        const double* row = &m.w[static_cast<std::size_t>(r) * m.cols];
        double s = out[r];
        for (int c = 0; c < m.cols; ++c) s += row[c] * x[c];
        out[r] = s;
    }
}

// out += m^T * d
void matvec_transposed(const Mat& m, const std::vector<double>& d, std::vector<double>& out) {
    for (int r = 0; r < m.rows; ++r) {
        const double* row = &m.w[static_cast<std::size_t>(r) * m.cols];
        double dr = d[r];
        if (dr == 0.0) continue;
        for (int c = 0; c < m.cols; ++c) out[c] += row[c] * dr;
    }
}

// grad(m) += d (outer) x
void outer_accumulate(Mat& m, const std::vector<double>& d, const std::vector<double>& x) {
    for (int r = 0; r < m.rows; ++r) {
        double* row = &m.g[static_cast<std::size_t>(r) * m.cols];
        double dr = d[r];
        if (dr == 0.0) continue;
        for (int c = 0; c < m.cols; ++c) row[c] += dr * x[c];
    }
}

std::vector<double> softmax(const std::vector<double>& z) {
    double mx = z[0];
    for (double v : z) mx = std::max(mx, v);
    std::vector<double> out(z.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        out[i] = std::exp(z[i] - mx);
        sum += out[i];
    }
    for (double& v : out) v /= sum;
    return out;
}

struct StepTape {
    StepInput input;
    std::vector<double> x_emb;
    std::vector<std::vector<double>> layer_in;   // input fed to each layer
    std::vector<std::vector<double>> drop_mult;  // output multiplier per layer (may be empty)
    std::vector<std::vector<double>> gi, gf, gg, go;
    std::vector<std::vector<double>> c, tanh_c, h;
    std::array<std::vector<double>, 5> head_a;
    std::array<std::vector<double>, 5> probs;
};

}  // namespace

Net::Net(const NetConfig& config) : cfg(config) {
    int k = cfg.input_k();
    if (k <= 0 || cfg.embedding_dim <= 0 || cfg.lstm_layers <= 0 || cfg.hidden_dim <= 0 ||
        cfg.mlp_hidden <= 0) {
        throw std::invalid_argument("Net: every dimension must be positive");
    }
    embedding = Mat(cfg.embedding_dim, k);
    layers.clear();
    for (int l = 0; l < cfg.lstm_layers; ++l) {
        int in_dim = l == 0 ? cfg.embedding_dim : cfg.hidden_dim;
        layers.push_back({Mat(4 * cfg.hidden_dim, in_dim), Mat(4 * cfg.hidden_dim, cfg.hidden_dim),
                          Mat(4 * cfg.hidden_dim, 1)});
    }
    for (int c = 0; c < 5; ++c) {
        heads[c] = {Mat(cfg.mlp_hidden, cfg.hidden_dim), Mat(cfg.mlp_hidden, 1),
                    Mat(cfg.block_dims[c], cfg.mlp_hidden), Mat(cfg.block_dims[c], 1)};
    }
}

void Net::init_params(Rng& rng) {
    auto fill_uniform = [&rng](Mat& m) {
        double bound = 1.0 / std::sqrt(static_cast<double>(m.cols));
        for (double& w : m.w) w = rng.next_double(-bound, bound);
    };
    fill_uniform(embedding);
    for (LstmLayer& layer : layers) {
        fill_uniform(layer.wx);
        fill_uniform(layer.wh);
        std::fill(layer.b.w.begin(), layer.b.w.end(), 0.0);
        // forget-gate bias starts open so early training does not wipe state
        for (int j = cfg.hidden_dim; j < 2 * cfg.hidden_dim; ++j) layer.b.w[j] = 1.0;
    }
    for (MlpHead& head : heads) {
        fill_uniform(head.w1);
        fill_uniform(head.w2);
        std::fill(head.b1.w.begin(), head.b1.w.end(), 0.0);
        std::fill(head.b2.w.begin(), head.b2.w.end(), 0.0);
    }
}

std::vector<std::pair<std::string, Mat*>> Net::parameters() {
    std::vector<std::pair<std::string, Mat*>> out;
    out.emplace_back("embedding", &embedding);
    for (std::size_t l = 0; l < layers.size(); ++l) {
        std::string base = "lstm" + std::to_string(l);
        out.emplace_back(base + ".wx", &layers[l].wx);
        out.emplace_back(base + ".wh", &layers[l].wh);
        out.emplace_back(base + ".b", &layers[l].b);
    }
    static const char* head_names[5] = {"t_u", "t_v", "L_u", "L_e", "L_v"};
    for (int c = 0; c < 5; ++c) {
        std::string base = std::string("head.") + head_names[c];
        out.emplace_back(base + ".w1", &heads[c].w1);
        out.emplace_back(base + ".b1", &heads[c].b1);
        out.emplace_back(base + ".w2", &heads[c].w2);
        out.emplace_back(base + ".b2", &heads[c].b2);
    }
    return out;
}

std::vector<std::pair<std::string, const Mat*>> Net::parameters() const {
    std::vector<std::pair<std::string, const Mat*>> out;
    for (auto& [name, mat] : const_cast<Net*>(this)->parameters()) out.emplace_back(name, mat);
    return out;
}

LstmState Net::initial_state() const {
    LstmState s;
    s.h.assign(layers.size(), std::vector<double>(cfg.hidden_dim, 0.0));
    s.c.assign(layers.size(), std::vector<double>(cfg.hidden_dim, 0.0));
    return s;
}

namespace {

std::vector<double> embed_input(const Net& net, const StepInput& in) {
    std::vector<double> x(net.cfg.embedding_dim, 0.0);
    if (in.sos) return x;
    auto offsets = net.cfg.block_offsets();
    for (int c = 0; c < 5; ++c) {
        if (in.idx[c] < 0 || in.idx[c] >= net.cfg.block_dims[c]) {
            throw std::out_of_range("Net: component index outside its block");
        }
        int col = offsets[c] + in.idx[c];
        for (int r = 0; r < net.cfg.embedding_dim; ++r) x[r] += net.embedding.at(r, col);
    }
    return x;
}

// Advances one LSTM layer; writes gate activations and fresh h/c.
void lstm_cell(const LstmLayer& layer, int hidden, const std::vector<double>& x,
               const std::vector<double>& h_prev, const std::vector<double>& c_prev,
               std::vector<double>& gi, std::vector<double>& gf, std::vector<double>& gg,
               std::vector<double>& go, std::vector<double>& c_out,
               std::vector<double>& tanh_c_out, std::vector<double>& h_out) {
    std::vector<double> z(layer.b.w);
    matvec(layer.wx, x, z, true);
    matvec(layer.wh, h_prev, z, true);

    gi.resize(hidden);
    gf.resize(hidden);
    gg.resize(hidden);
    go.resize(hidden);
    c_out.resize(hidden);
    tanh_c_out.resize(hidden);
    h_out.resize(hidden);
    for (int j = 0; j < hidden; ++j) {
        gi[j] = sigmoid(z[j]);
        gf[j] = sigmoid(z[hidden + j]);
        gg[j] = std::tanh(z[2 * hidden + j]);
        go[j] = sigmoid(z[3 * hidden + j]);
        c_out[j] = gf[j] * c_prev[j] + gi[j] * gg[j];
        tanh_c_out[j] = std::tanh(c_out[j]);
        h_out[j] = go[j] * tanh_c_out[j];
    }
}

std::array<std::vector<double>, 5> run_heads(const Net& net, const std::vector<double>& h_top,
                                             std::array<std::vector<double>, 5>* a_out) {
    std::array<std::vector<double>, 5> probs;
    for (int c = 0; c < 5; ++c) {
        const MlpHead& head = net.heads[c];
        std::vector<double> a(head.b1.w);
        matvec(head.w1, h_top, a, true);
        for (double& v : a) v = std::max(0.0, v);
        std::vector<double> z(head.b2.w);
        matvec(head.w2, a, z, true);
        probs[c] = softmax(z);
        if (a_out) (*a_out)[c] = std::move(a);
    }
    return probs;
}

double bce_against_onehot(const std::vector<double>& probs, int target) {
    double loss = 0.0;
    for (std::size_t j = 0; j < probs.size(); ++j) {
        double p = std::clamp(probs[j], kProbClamp, 1.0 - kProbClamp);
        if (static_cast<int>(j) == target) {
            loss -= std::log(p);
        } else {
            loss -= std::log(1.0 - p);
        }
    }
    return loss;
}

// dL/dprobs for the clamped elementwise BCE; zero where the clamp saturates.
void bce_grad(const std::vector<double>& probs, int target, std::vector<double>& dprobs) {
    dprobs.assign(probs.size(), 0.0);
    for (std::size_t j = 0; j < probs.size(); ++j) {
        double p = probs[j];
        if (p < kProbClamp || p > 1.0 - kProbClamp) continue;
        if (static_cast<int>(j) == target) {
            dprobs[j] = -1.0 / p;
        } else {
            dprobs[j] = 1.0 / (1.0 - p);
        }
    }
}

}  // namespace

std::array<std::vector<double>, 5> Net::forward_step(LstmState& state, const StepInput& in) const {
    std::vector<double> x = embed_input(*this, in);
    std::vector<double> gi, gf, gg, go, c_new, tanh_c, h_new;
    for (std::size_t l = 0; l < layers.size(); ++l) {
        lstm_cell(layers[l], cfg.hidden_dim, x, state.h[l], state.c[l], gi, gf, gg, go, c_new,
                  tanh_c, h_new);
        state.c[l] = c_new;
        state.h[l] = h_new;
        x = h_new;
    }
    return run_heads(*this, state.h.back(), nullptr);
}

double Net::sequence_loss(const std::vector<std::array<int, 5>>& targets) const {
    LstmState state = initial_state();
    double loss = 0.0;
    for (std::size_t m = 0; m < targets.size(); ++m) {
        StepInput in = m == 0 ? StepInput::start() : StepInput::of(targets[m - 1]);
        auto probs = forward_step(state, in);
        for (int c = 0; c < 5; ++c) loss += bce_against_onehot(probs[c], targets[m][c]);
    }
    return loss;
}

double Net::accumulate_gradients(const std::vector<std::array<int, 5>>& targets,
                                 Rng& dropout_rng) {
    const int H = cfg.hidden_dim;
    const int L = cfg.lstm_layers;
    const std::size_t T = targets.size();
    if (T == 0) return 0.0;

    std::vector<StepTape> tape(T);

    // forward pass with caching
    LstmState state = initial_state();
    double loss = 0.0;
    for (std::size_t m = 0; m < T; ++m) {
        StepTape& st = tape[m];
        st.input = m == 0 ? StepInput::start() : StepInput::of(targets[m - 1]);
        st.x_emb = embed_input(*this, st.input);
        st.layer_in.resize(L);
        st.drop_mult.resize(L);
        st.gi.resize(L);
        st.gf.resize(L);
        st.gg.resize(L);
        st.go.resize(L);
        st.c.resize(L);
        st.tanh_c.resize(L);
        st.h.resize(L);

        std::vector<double> x = st.x_emb;
        for (int l = 0; l < L; ++l) {
            st.layer_in[l] = x;
            lstm_cell(layers[l], H, x, state.h[l], state.c[l], st.gi[l], st.gf[l], st.gg[l],
                      st.go[l], st.c[l], st.tanh_c[l], st.h[l]);
            state.h[l] = st.h[l];
            state.c[l] = st.c[l];
            x = st.h[l];
            // inverted dropout on the output feeding the next layer; the
            // recurrent path and the top output stay undropped
            if (cfg.dropout > 0.0 && l + 1 < L) {
                st.drop_mult[l].resize(H);
                double keep = 1.0 - cfg.dropout;
                for (int j = 0; j < H; ++j) {
                    st.drop_mult[l][j] = dropout_rng.next_double() < cfg.dropout ? 0.0 : 1.0 / keep;
                    x[j] *= st.drop_mult[l][j];
                }
            }
        }
        st.probs = run_heads(*this, st.h[L - 1], &st.head_a);
        for (int c = 0; c < 5; ++c) loss += bce_against_onehot(st.probs[c], targets[m][c]);
    }

    // backward pass
    std::vector<std::vector<double>> dh_rec(L, std::vector<double>(H, 0.0));
    std::vector<std::vector<double>> dc_rec(L, std::vector<double>(H, 0.0));
    std::vector<double> dprobs, dz2, da, dh_top, zeros(H, 0.0);
    for (std::size_t mi = T; mi-- > 0;) {
        StepTape& st = tape[mi];
        dh_top.assign(H, 0.0);
        for (int c = 0; c < 5; ++c) {
            MlpHead& head = heads[c];
            const std::vector<double>& probs = st.probs[c];
            bce_grad(probs, targets[mi][c], dprobs);

            // softmax jacobian: dz_j = p_j * (dp_j - sum_i p_i dp_i)
            double inner = 0.0;
            for (std::size_t j = 0; j < probs.size(); ++j) inner += probs[j] * dprobs[j];
            dz2.resize(probs.size());
            for (std::size_t j = 0; j < probs.size(); ++j) {
                dz2[j] = probs[j] * (dprobs[j] - inner);
            }

            outer_accumulate(head.w2, dz2, st.head_a[c]);
            for (std::size_t j = 0; j < dz2.size(); ++j) head.b2.g[j] += dz2[j];

            da.assign(cfg.mlp_hidden, 0.0);
            matvec_transposed(head.w2, dz2, da);
            for (int j = 0; j < cfg.mlp_hidden; ++j) {
                if (st.head_a[c][j] <= 0.0) da[j] = 0.0;
            }
            outer_accumulate(head.w1, da, st.h[L - 1]);
            for (int j = 0; j < cfg.mlp_hidden; ++j) head.b1.g[j] += da[j];
            matvec_transposed(head.w1, da, dh_top);
        }

        std::vector<double> d_above;
        for (int l = L - 1; l >= 0; --l) {
            std::vector<double> dh = dh_rec[l];
            if (l == L - 1) {
                for (int j = 0; j < H; ++j) dh[j] += dh_top[j];
            } else {
                const std::vector<double>& mult = st.drop_mult[l];
                if (mult.empty()) {
                    for (int j = 0; j < H; ++j) dh[j] += d_above[j];
                } else {
                    for (int j = 0; j < H; ++j) dh[j] += d_above[j] * mult[j];
                }
            }

            const std::vector<double>& c_prev = mi > 0 ? tape[mi - 1].c[l] : zeros;
            const std::vector<double>& h_prev = mi > 0 ? tape[mi - 1].h[l] : zeros;

            std::vector<double> dz(4 * H);
            std::vector<double>& dc_next = dc_rec[l];
            for (int j = 0; j < H; ++j) {
                double tc = st.tanh_c[l][j];
                double dtc = dh[j] * st.go[l][j] * (1.0 - tc * tc) + dc_next[j];
                double di = dtc * st.gg[l][j];
                double df = dtc * c_prev[j];
                double dg = dtc * st.gi[l][j];
                double do_ = dh[j] * tc;
                dz[j] = di * st.gi[l][j] * (1.0 - st.gi[l][j]);
                dz[H + j] = df * st.gf[l][j] * (1.0 - st.gf[l][j]);
                dz[2 * H + j] = dg * (1.0 - st.gg[l][j] * st.gg[l][j]);
                dz[3 * H + j] = do_ * st.go[l][j] * (1.0 - st.go[l][j]);
                dc_next[j] = dtc * st.gf[l][j];
            }

            LstmLayer& layer = layers[l];
            outer_accumulate(layer.wx, dz, st.layer_in[l]);
            outer_accumulate(layer.wh, dz, h_prev);
            for (int j = 0; j < 4 * H; ++j) layer.b.g[j] += dz[j];

            dh_rec[l].assign(H, 0.0);
            matvec_transposed(layer.wh, dz, dh_rec[l]);

            d_above.assign(layer.wx.cols, 0.0);
            matvec_transposed(layer.wx, dz, d_above);
        }

        if (!st.input.sos) {
            auto offsets = cfg.block_offsets();
            for (int c = 0; c < 5; ++c) {
                int col = offsets[c] + st.input.idx[c];
                for (int r = 0; r < cfg.embedding_dim; ++r) {
                    embedding.grad_at(r, col) += d_above[r];
                }
            }
        }
    }
    return loss;
}

void Net::zero_grads() {
    for (auto& [name, mat] : parameters()) mat->zero_grad();
}

void Net::scale_grads(double factor) {
    for (auto& [name, mat] : parameters()) {
        for (double& g : mat->g) g *= factor;
    }
}

double Net::grad_norm() const {
    double total = 0.0;
    for (auto& [name, mat] : parameters()) {
        for (double g : mat->g) total += g * g;
    }
    return std::sqrt(total);
}

void AdamState::attach(const Net& net) {
    auto params = net.parameters();
    if (m.size() == params.size()) return;
    m.clear();
    v.clear();
    for (auto& [name, mat] : params) {
        m.emplace_back(mat->size(), 0.0);
        v.emplace_back(mat->size(), 0.0);
    }
}

void AdamState::apply(Net& net) {
    attach(net);
    auto params = net.parameters();
    ++step;

    double scale = 1.0;
    if (cfg.clip_norm > 0.0) {
        double norm = net.grad_norm();
        if (norm > cfg.clip_norm) scale = cfg.clip_norm / norm;
    }

    double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
    double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
    for (std::size_t p = 0; p < params.size(); ++p) {
        Mat& mat = *params[p].second;
        std::vector<double>& mp = m[p];
        std::vector<double>& vp = v[p];
        for (std::size_t i = 0; i < mat.size(); ++i) {
            double g = mat.g[i] * scale;
            mp[i] = cfg.beta1 * mp[i] + (1.0 - cfg.beta1) * g;
            vp[i] = cfg.beta2 * vp[i] + (1.0 - cfg.beta2) * g * g;
            double m_hat = mp[i] / bc1;
            double v_hat = vp[i] / bc2;
            mat.w[i] -= cfg.lr * (m_hat / (std::sqrt(v_hat) + cfg.eps) + cfg.weight_decay * mat.w[i]);
        }
    }
}

FdReport finite_difference_check(const Net& net, const std::vector<std::array<int, 5>>& targets,
                                 int samples_per_param, double tolerance, std::uint64_t seed) {
    Net probe = net;
    probe.cfg.dropout = 0.0;
    probe.zero_grads();
    Rng unused(seed);
    probe.accumulate_gradients(targets, unused);

    FdReport report;
    report.tolerance = tolerance;
    Rng rng(seed);
    const double eps = 1e-5;
    for (auto& [name, mat] : probe.parameters()) {
        FdEntry entry{name, 0.0};
        int samples = std::min<int>(samples_per_param, static_cast<int>(mat->size()));
        for (int s = 0; s < samples; ++s) {
            std::size_t i = static_cast<std::size_t>(rng.next_below(mat->size()));
            double saved = mat->w[i];
            mat->w[i] = saved + eps;
            double up = probe.sequence_loss(targets);
            mat->w[i] = saved - eps;
            double down = probe.sequence_loss(targets);
            mat->w[i] = saved;
            double numeric = (up - down) / (2.0 * eps);
            double analytic = mat->g[i];
            double rel = std::abs(numeric - analytic) /
                         std::max(1.0, std::abs(numeric) + std::abs(analytic));
            entry.max_rel_err = std::max(entry.max_rel_err, rel);
        }
        report.max_rel_err = std::max(report.max_rel_err, entry.max_rel_err);
        report.per_param.push_back(std::move(entry));
    }
    report.pass = report.max_rel_err <= tolerance;
    return report;
}

}  // namespace graphgen
