#include <algorithm>
#include <bit>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "graphgen/model.hpp"

/*
 * Checkpoint layout, all integers little-endian:
 *
 *   magic "GGENCKP1", u32 format version
 *   vocabulary   (dim_t, node labels, edge labels)
 *   train config (dims, optimizer, early stop, max_len, seed, threads)
 *   u64 model seed
 *   parameters   (count, then name / rows / cols / row-major doubles each)
 *   u8 snapshot flag, optionally the training snapshot
 *   u64 FNV-1a of every preceding byte
 *
 * The checksum is verified before any field is parsed, so a truncated or
 * bit-flipped file fails as ChecksumMismatch rather than as garbage values.
 */

namespace graphgen {

namespace {

constexpr char kMagic[8] = {'G', 'G', 'E', 'N', 'C', 'K', 'P', '1'};
constexpr std::uint32_t kVersion = 1;

std::uint64_t fnv1a64(const char* data, std::size_t size) {
    std::uint64_t hash = 14695981039346656037ull;
    for (std::size_t i = 0; i < size; ++i) {
        hash ^= static_cast<unsigned char>(data[i]);
        hash *= 1099511628211ull;
    }
    return hash;
}

struct ByteWriter {
    std::string buf;

    void raw(const void* p, std::size_t n) { buf.append(static_cast<const char*>(p), n); }
    void u8(std::uint8_t v) { buf.push_back(static_cast<char>(v)); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
    void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
    void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void str(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        raw(s.data(), s.size());
    }
    void f64_vec(const std::vector<double>& v) {
        u32(static_cast<std::uint32_t>(v.size()));
        for (double d : v) f64(d);
    }
};

struct ByteReader {
    const std::string& buf;
    std::size_t limit;
    std::size_t pos = 0;

    void need(std::size_t n) const {
        if (pos + n > limit)
            throw CheckpointVersionMismatch("checkpoint: unexpected end of data");
    }
    void raw(void* p, std::size_t n) {
        need(n);
        std::copy_n(buf.data() + pos, n, static_cast<char*>(p));
        pos += n;
    }
    std::uint8_t u8() {
        need(1);
        return static_cast<std::uint8_t>(buf[pos++]);
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[pos + i])) << (8 * i);
        pos += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[pos + i])) << (8 * i);
        pos += 8;
        return v;
    }
    std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
    std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
    double f64() { return std::bit_cast<double>(u64()); }
    std::string str() {
        std::uint32_t n = u32();
        need(n);
        std::string s(buf.data() + pos, n);
        pos += n;
        return s;
    }
    std::vector<double> f64_vec() {
        std::uint32_t n = u32();
        std::vector<double> v(n);
        for (std::uint32_t i = 0; i < n; ++i) v[i] = f64();
        return v;
    }
};

void write_vocab(ByteWriter& w, const VocabSpec& vocab) {
    w.i32(vocab.dim_t);
    w.u32(static_cast<std::uint32_t>(vocab.node_labels.size()));
    for (const std::string& label : vocab.node_labels) w.str(label);
    w.u32(static_cast<std::uint32_t>(vocab.edge_labels.size()));
    for (const std::string& label : vocab.edge_labels) w.str(label);
}

VocabSpec read_vocab(ByteReader& r) {
    VocabSpec vocab;
    vocab.dim_t = r.i32();
    std::uint32_t nodes = r.u32();
    vocab.node_labels.reserve(nodes);
    for (std::uint32_t i = 0; i < nodes; ++i) vocab.node_labels.push_back(r.str());
    std::uint32_t edges = r.u32();
    vocab.edge_labels.reserve(edges);
    for (std::uint32_t i = 0; i < edges; ++i) vocab.edge_labels.push_back(r.str());
    return vocab;
}

void write_config(ByteWriter& w, const TrainConfig& cfg) {
    w.i32(cfg.epochs);
    w.i32(cfg.batch_size);
    w.i32(cfg.lstm_layers);
    w.i32(cfg.hidden_dim);
    w.i32(cfg.embedding_dim);
    w.i32(cfg.mlp_hidden);
    w.f64(cfg.dropout);
    w.f64(cfg.optimizer.lr);
    w.f64(cfg.optimizer.beta1);
    w.f64(cfg.optimizer.beta2);
    w.f64(cfg.optimizer.eps);
    w.f64(cfg.optimizer.weight_decay);
    w.f64(cfg.optimizer.clip_norm);
    w.f64(cfg.early_stop_rel_change);
    w.i32(cfg.early_stop_patience);
    w.i32(cfg.max_len);
    w.u64(cfg.seed);
    w.i32(cfg.threads);
}

TrainConfig read_config(ByteReader& r) {
    TrainConfig cfg;
    cfg.epochs = r.i32();
    cfg.batch_size = r.i32();
    cfg.lstm_layers = r.i32();
    cfg.hidden_dim = r.i32();
    cfg.embedding_dim = r.i32();
    cfg.mlp_hidden = r.i32();
    cfg.dropout = r.f64();
    cfg.optimizer.lr = r.f64();
    cfg.optimizer.beta1 = r.f64();
    cfg.optimizer.beta2 = r.f64();
    cfg.optimizer.eps = r.f64();
    cfg.optimizer.weight_decay = r.f64();
    cfg.optimizer.clip_norm = r.f64();
    cfg.early_stop_rel_change = r.f64();
    cfg.early_stop_patience = r.i32();
    cfg.max_len = r.i32();
    cfg.seed = r.u64();
    cfg.threads = r.i32();
    return cfg;
}

void write_param_list(ByteWriter& w, const std::vector<std::vector<double>>& params) {
    w.u32(static_cast<std::uint32_t>(params.size()));
    for (const std::vector<double>& p : params) w.f64_vec(p);
}

std::vector<std::vector<double>> read_param_list(ByteReader& r) {
    std::uint32_t count = r.u32();
    std::vector<std::vector<double>> params(count);
    for (std::uint32_t i = 0; i < count; ++i) params[i] = r.f64_vec();
    return params;
}

void write_snapshot(ByteWriter& w, const TrainingSnapshot& snap) {
    w.i32(snap.epochs_done);
    w.i32(snap.best_epoch);
    w.i32(snap.stall_streak);
    w.f64(snap.best_valid_loss);
    w.f64(snap.prev_valid_loss);
    w.i64(snap.adam.step);
    w.f64(snap.adam.cfg.lr);
    w.f64(snap.adam.cfg.beta1);
    w.f64(snap.adam.cfg.beta2);
    w.f64(snap.adam.cfg.eps);
    w.f64(snap.adam.cfg.weight_decay);
    w.f64(snap.adam.cfg.clip_norm);
    write_param_list(w, snap.adam.m);
    write_param_list(w, snap.adam.v);
    write_param_list(w, snap.final_params);
    write_param_list(w, snap.best_params);
    w.u32(static_cast<std::uint32_t>(snap.history.size()));
    for (const EpochStats& row : snap.history) {
        w.i32(row.epoch);
        w.f64(row.train_loss);
        w.f64(row.valid_loss);
    }
}

TrainingSnapshot read_snapshot(ByteReader& r) {
    TrainingSnapshot snap;
    snap.epochs_done = r.i32();
    snap.best_epoch = r.i32();
    snap.stall_streak = r.i32();
    snap.best_valid_loss = r.f64();
    snap.prev_valid_loss = r.f64();
    snap.adam.step = r.i64();
    snap.adam.cfg.lr = r.f64();
    snap.adam.cfg.beta1 = r.f64();
    snap.adam.cfg.beta2 = r.f64();
    snap.adam.cfg.eps = r.f64();
    snap.adam.cfg.weight_decay = r.f64();
    snap.adam.cfg.clip_norm = r.f64();
    snap.adam.m = read_param_list(r);
    snap.adam.v = read_param_list(r);
    snap.final_params = read_param_list(r);
    snap.best_params = read_param_list(r);
    std::uint32_t rows = r.u32();
    snap.history.reserve(rows);
    for (std::uint32_t i = 0; i < rows; ++i) {
        EpochStats row;
        row.epoch = r.i32();
        row.train_loss = r.f64();
        row.valid_loss = r.f64();
        snap.history.push_back(row);
    }
    return snap;
}

}  // namespace

void save_checkpoint(const std::string& path, const GenerativeModel& model,
                     const TrainingSnapshot* snapshot) {
    ByteWriter w;
    w.raw(kMagic, sizeof kMagic);
    w.u32(kVersion);
    write_vocab(w, model.vocab);
    write_config(w, model.config);
    w.u64(model.seed);

    auto params = model.net.parameters();
    w.u32(static_cast<std::uint32_t>(params.size()));
    for (const auto& [name, mat] : params) {
        w.str(name);
        w.i32(mat->rows);
        w.i32(mat->cols);
        for (double d : mat->w) w.f64(d);
    }

    if (snapshot != nullptr) {
        w.u8(1);
        write_snapshot(w, *snapshot);
    } else {
        w.u8(0);
    }

    w.u64(fnv1a64(w.buf.data(), w.buf.size()));

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw CheckpointIoError("checkpoint: cannot open " + path + " for writing");
    out.write(w.buf.data(), static_cast<std::streamsize>(w.buf.size()));
    out.flush();
    if (!out) throw CheckpointIoError("checkpoint: write to " + path + " failed");
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointIoError("checkpoint: cannot open " + path);
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw CheckpointIoError("checkpoint: read from " + path + " failed");

    if (data.size() < sizeof kMagic + 4 + 8)
        throw CheckpointChecksumMismatch("checkpoint: file too short");
    std::uint64_t stored = 0;
    for (int i = 0; i < 8; ++i)
        stored |= static_cast<std::uint64_t>(
                      static_cast<unsigned char>(data[data.size() - 8 + i]))
                  << (8 * i);
    if (fnv1a64(data.data(), data.size() - 8) != stored)
        throw CheckpointChecksumMismatch("checkpoint: checksum mismatch, file truncated or corrupted");

    ByteReader r{data, data.size() - 8};
    char magic[sizeof kMagic];
    r.raw(magic, sizeof magic);
    if (!std::equal(magic, magic + sizeof magic, kMagic))
        throw CheckpointVersionMismatch("checkpoint: not a model checkpoint");
    std::uint32_t version = r.u32();
    if (version != kVersion)
        throw CheckpointVersionMismatch("checkpoint: unsupported format version " +
                                        std::to_string(version));

    LoadedCheckpoint loaded;
    loaded.model.vocab = read_vocab(r);
    loaded.model.config = read_config(r);
    loaded.model.seed = r.u64();
    loaded.model.net = Net(net_config_for(loaded.model.config, loaded.model.vocab));

    auto live = loaded.model.net.parameters();
    std::uint32_t count = r.u32();
    if (count != live.size())
        throw CheckpointVersionMismatch("checkpoint: parameter layout mismatch");
    for (auto& [name, mat] : live) {
        std::string stored_name = r.str();
        std::int32_t rows = r.i32();
        std::int32_t cols = r.i32();
        if (stored_name != name || rows != mat->rows || cols != mat->cols)
            throw CheckpointVersionMismatch("checkpoint: parameter layout mismatch at " + name);
        for (double& d : mat->w) d = r.f64();
    }

    if (r.u8() != 0) loaded.snapshot = read_snapshot(r);
    if (r.pos != r.limit)
        throw CheckpointVersionMismatch("checkpoint: trailing bytes after snapshot");
    return loaded;
}

}  // namespace graphgen
