#include "graphgen/config.hpp"

#include <cctype>
#include <climits>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

namespace graphgen {

namespace {

std::string trim(const std::string& s) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
    return s.substr(begin, end - begin);
}

int parse_i(const std::string& value) {
    std::size_t used = 0;
    long long parsed = 0;
    try {
        parsed = std::stoll(value, &used);
    } catch (const std::exception&) {
        throw ConfigError("expected an integer, got '" + value + "'");
    }
    if (used != value.size() || parsed < INT_MIN || parsed > INT_MAX)
        throw ConfigError("expected an integer, got '" + value + "'");
    return static_cast<int>(parsed);
}

std::uint64_t parse_u64(const std::string& value) {
    std::size_t used = 0;
    unsigned long long parsed = 0;
    try {
        parsed = std::stoull(value, &used);
    } catch (const std::exception&) {
        throw ConfigError("expected a non-negative integer, got '" + value + "'");
    }
    if (used != value.size() || value.front() == '-')
        throw ConfigError("expected a non-negative integer, got '" + value + "'");
    return parsed;
}

double parse_f(const std::string& value) {
    std::size_t used = 0;
    double parsed = 0.0;
    try {
        parsed = std::stod(value, &used);
    } catch (const std::exception&) {
        throw ConfigError("expected a number, got '" + value + "'");
    }
    if (used != value.size()) throw ConfigError("expected a number, got '" + value + "'");
    return parsed;
}

bool parse_b(const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError("expected true/false, got '" + value + "'");
}

std::string render_f(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string render_i(long long value) { return std::to_string(value); }

struct Binding {
    const char* section;
    const char* key;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

const std::vector<Binding>& bindings() {
    static const std::vector<Binding> table = [] {
        std::vector<Binding> t;
        auto add = [&t](const char* section, const char* key, auto set, auto get) {
            t.push_back({section, key, set, get});
        };

        add(
            "data", "dataset", [](RunConfig& c, const std::string& v) { c.dataset = v; },
            [](const RunConfig& c) { return c.dataset; });
        add(
            "data", "train_ratio",
            [](RunConfig& c, const std::string& v) { c.ratios.train = parse_f(v); },
            [](const RunConfig& c) { return render_f(c.ratios.train); });
        add(
            "data", "validation_ratio",
            [](RunConfig& c, const std::string& v) { c.ratios.validation = parse_f(v); },
            [](const RunConfig& c) { return render_f(c.ratios.validation); });
        add(
            "data", "test_ratio",
            [](RunConfig& c, const std::string& v) { c.ratios.test = parse_f(v); },
            [](const RunConfig& c) { return render_f(c.ratios.test); });
        add(
            "data", "split_seed",
            [](RunConfig& c, const std::string& v) { c.split_seed = parse_u64(v); },
            [](const RunConfig& c) { return render_i(static_cast<long long>(c.split_seed)); });

        add(
            "augment", "use_degree",
            [](RunConfig& c, const std::string& v) { c.augment.use_degree = parse_b(v); },
            [](const RunConfig& c) { return c.augment.use_degree ? "true" : "false"; });
        add(
            "augment", "use_clustering",
            [](RunConfig& c, const std::string& v) { c.augment.use_clustering = parse_b(v); },
            [](const RunConfig& c) { return c.augment.use_clustering ? "true" : "false"; });
        add(
            "augment", "clustering_decimals",
            [](RunConfig& c, const std::string& v) { c.augment.clustering_decimals = parse_i(v); },
            [](const RunConfig& c) { return render_i(c.augment.clustering_decimals); });

        add(
            "model", "epochs",
            [](RunConfig& c, const std::string& v) { c.model.epochs = parse_i(v); },
            [](const RunConfig& c) { return render_i(c.model.epochs); });
        add(
            "model", "batch_size",
            [](RunConfig& c, const std::string& v) { c.model.batch_size = parse_i(v); },
            [](const RunConfig& c) { return render_i(c.model.batch_size); });
        add(
            "model", "lstm_layers",
            [](RunConfig& c, const std::string& v) { c.model.lstm_layers = parse_i(v); },
            [](const RunConfig& c) { return render_i(c.model.lstm_layers); });
        add(
            "model", "hidden_dim",
            [](RunConfig& c, const std::string& v) { c.model.hidden_dim = parse_i(v); },
            [](const RunConfig& c) { return render_i(c.model.hidden_dim); });
        add(
            "model", "embedding_dim",
            [](RunConfig& c, const std::string& v) { c.model.embedding_dim = parse_i(v); },
            [](const RunConfig& c) { return render_i(c.model.embedding_dim); });
        add(
            "model", "mlp_hidden",
            [](RunConfig& c, const std::string& v) { c.model.mlp_hidden = parse_i(v); },
            [](const RunConfig& c) { return render_i(c.model.mlp_hidden); });
        add(
            "model", "dropout",
            [](RunConfig& c, const std::string& v) { c.model.dropout = parse_f(v); },
            [](const RunConfig& c) { return render_f(c.model.dropout); });
        add(
            "model", "learning_rate",
            [](RunConfig& c, const std::string& v) { c.model.optimizer.lr = parse_f(v); },
            [](const RunConfig& c) { return render_f(c.model.optimizer.lr); });
        add(
            "model", "weight_decay",
            [](RunConfig& c, const std::string& v) { c.model.optimizer.weight_decay = parse_f(v); },
            [](const RunConfig& c) { return render_f(c.model.optimizer.weight_decay); });
        add(
            "model", "clip_norm",
            [](RunConfig& c, const std::string& v) { c.model.optimizer.clip_norm = parse_f(v); },
            [](const RunConfig& c) { return render_f(c.model.optimizer.clip_norm); });
        add(
            "model", "early_stop_rel_change",
            [](RunConfig& c, const std::string& v) { c.model.early_stop_rel_change = parse_f(v); },
            [](const RunConfig& c) { return render_f(c.model.early_stop_rel_change); });
        add(
            "model", "early_stop_patience",
            [](RunConfig& c, const std::string& v) { c.model.early_stop_patience = parse_i(v); },
            [](const RunConfig& c) { return render_i(c.model.early_stop_patience); });
        add(
            "model", "max_len",
            [](RunConfig& c, const std::string& v) { c.model.max_len = parse_i(v); },
            [](const RunConfig& c) { return render_i(c.model.max_len); });
        add(
            "model", "seed", [](RunConfig& c, const std::string& v) { c.model.seed = parse_u64(v); },
            [](const RunConfig& c) { return render_i(static_cast<long long>(c.model.seed)); });
        add(
            "model", "threads",
            [](RunConfig& c, const std::string& v) { c.model.threads = parse_i(v); },
            [](const RunConfig& c) { return render_i(c.model.threads); });

        add(
            "generate", "count",
            [](RunConfig& c, const std::string& v) { c.generate_count = parse_i(v); },
            [](const RunConfig& c) { return render_i(c.generate_count); });
        add(
            "generate", "max_len",
            [](RunConfig& c, const std::string& v) { c.generate_max_len = parse_i(v); },
            [](const RunConfig& c) { return render_i(c.generate_max_len); });

        add(
            "metrics", "batch_count",
            [](RunConfig& c, const std::string& v) { c.metrics.batch_count = parse_i(v); },
            [](const RunConfig& c) { return render_i(c.metrics.batch_count); });
        add(
            "metrics", "batch_size",
            [](RunConfig& c, const std::string& v) { c.metrics.batch_size = parse_i(v); },
            [](const RunConfig& c) { return render_i(c.metrics.batch_size); });
        add(
            "metrics", "sigma",
            [](RunConfig& c, const std::string& v) { c.metrics.sigma = parse_f(v); },
            [](const RunConfig& c) { return render_f(c.metrics.sigma); });
        add(
            "metrics", "nspdk_r_max",
            [](RunConfig& c, const std::string& v) { c.metrics.nspdk.r_max = parse_i(v); },
            [](const RunConfig& c) { return render_i(c.metrics.nspdk.r_max); });
        add(
            "metrics", "nspdk_d_max",
            [](RunConfig& c, const std::string& v) { c.metrics.nspdk.d_max = parse_i(v); },
            [](const RunConfig& c) { return render_i(c.metrics.nspdk.d_max); });
        add(
            "metrics", "iso_budget",
            [](RunConfig& c, const std::string& v) { c.metrics.match.max_expansions = parse_u64(v); },
            [](const RunConfig& c) {
                return render_i(static_cast<long long>(c.metrics.match.max_expansions));
            });
        add(
            "metrics", "seed",
            [](RunConfig& c, const std::string& v) { c.metrics.seed = parse_u64(v); },
            [](const RunConfig& c) { return render_i(static_cast<long long>(c.metrics.seed)); });

        add(
            "output", "dir", [](RunConfig& c, const std::string& v) { c.output_dir = v; },
            [](const RunConfig& c) { return c.output_dir; });
        return t;
    }();
    return table;
}

const Binding* find_binding(const std::string& section, const std::string& key) {
    for (const Binding& b : bindings())
        if (section == b.section && key == b.key) return &b;
    return nullptr;
}

std::string env_name(const Binding& b) {
    std::string name = "GRAPHGEN_";
    for (const char* p = b.section; *p; ++p)
        name.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(*p))));
    name.push_back('_');
    for (const char* p = b.key; *p; ++p)
        name.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(*p))));
    return name;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        char where[32];
        std::snprintf(where, sizeof where, "config line %d: ", line_no);
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(where + std::string("unterminated section header"));
            section = trim(line.substr(1, line.size() - 2));
            bool known = false;
            for (const Binding& b : bindings()) known = known || section == b.section;
            if (!known) throw ConfigError(where + ("unknown section [" + section + "]"));
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(where + std::string("expected 'key = value'"));
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw ConfigError(where + std::string("key before any [section] header"));
        const Binding* binding = find_binding(section, key);
        if (binding == nullptr)
            throw ConfigError(where + ("unknown key '" + key + "' in section [" + section + "]"));
        try {
            binding->set(cfg, value);
        } catch (const ConfigError& e) {
            throw ConfigError(where + ("key '" + key + "': " + e.what()));
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

void apply_overrides(RunConfig& cfg, const std::map<std::string, std::string>& env) {
    for (const Binding& b : bindings()) {
        auto it = env.find(env_name(b));
        if (it == env.end()) continue;
        try {
            b.set(cfg, it->second);
        } catch (const ConfigError& e) {
            throw ConfigError(it->first + ": " + e.what());
        }
    }
}

void apply_env_overrides(RunConfig& cfg) {
    std::map<std::string, std::string> env;
    for (const Binding& b : bindings()) {
        std::string name = env_name(b);
        const char* value = std::getenv(name.c_str());
        if (value != nullptr) env[name] = value;
    }
    apply_overrides(cfg, env);
}

std::string config_to_text(const RunConfig& cfg) {
    std::string out;
    std::string section;
    for (const Binding& b : bindings()) {
        if (section != b.section) {
            if (!section.empty()) out.push_back('\n');
            section = b.section;
            out += "[" + section + "]\n";
        }
        out += std::string(b.key) + " = " + b.get(cfg) + "\n";
    }
    return out;
}

}  // namespace graphgen
