#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include "graphgen/config.hpp"

using namespace graphgen;

TEST_CASE("empty config is the desk profile") {
    RunConfig cfg = parse_config_text("");
    TrainConfig desk = TrainConfig::desk_profile();
    CHECK(cfg.model.epochs == desk.epochs);
    CHECK(cfg.model.lstm_layers == desk.lstm_layers);
    CHECK(cfg.model.hidden_dim == desk.hidden_dim);
    CHECK(cfg.model.dropout == desk.dropout);
    CHECK(cfg.ratios.train == 0.8);
    CHECK(cfg.ratios.validation == 0.1);
    CHECK(cfg.generate_count == 2560);
    CHECK(cfg.metrics.batch_count == 10);
    CHECK(cfg.metrics.batch_size == 256);
    CHECK(cfg.metrics.nspdk.r_max == 2);
    CHECK(cfg.metrics.nspdk.d_max == 4);
    CHECK(cfg.output_dir == "out");
    CHECK(!cfg.augment.any());
}

TEST_CASE("sections and keys set the right fields") {
    RunConfig cfg = parse_config_text(
        "# an experiment\n"
        "[data]\n"
        "dataset = my graphs.txt\n"
        "train_ratio = 0.7\n"
        "validation_ratio = 0.2\n"
        "test_ratio = 0.1\n"
        "split_seed = 99\n"
        "\n"
        "[augment]\n"
        "use_degree = true\n"
        "clustering_decimals = 3\n"
        "\n"
        "[model]\n"
        "epochs = 12\n"
        "hidden_dim = 48\n"
        "learning_rate = 0.001\n"
        "weight_decay = 0.0001\n"
        "seed = 5\n"
        "\n"
        "[generate]\n"
        "count = 64\n"
        "max_len = 30\n"
        "\n"
        "[metrics]\n"
        "sigma = 2.5\n"
        "iso_budget = 5000\n"
        "\n"
        "[output]\n"
        "dir = runs/exp1\n");
    CHECK(cfg.dataset == "my graphs.txt");
    CHECK(cfg.ratios.train == 0.7);
    CHECK(cfg.split_seed == 99);
    CHECK(cfg.augment.use_degree);
    CHECK(!cfg.augment.use_clustering);
    CHECK(cfg.augment.clustering_decimals == 3);
    CHECK(cfg.model.epochs == 12);
    CHECK(cfg.model.hidden_dim == 48);
    CHECK(cfg.model.optimizer.lr == 0.001);
    CHECK(cfg.model.optimizer.weight_decay == 0.0001);
    CHECK(cfg.model.seed == 5);
    CHECK(cfg.generate_count == 64);
    CHECK(cfg.generate_max_len == 30);
    CHECK(cfg.metrics.sigma == 2.5);
    CHECK(cfg.metrics.match.max_expansions == 5000);
    CHECK(cfg.output_dir == "runs/exp1");
}

TEST_CASE("malformed configs raise ConfigError naming the line") {
    auto message_of = [](const std::string& text) {
        try {
            parse_config_text(text);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message_of("[nope]\n").find("line 1") != std::string::npos);
    CHECK(message_of("[nope]\n").find("unknown section") != std::string::npos);
    CHECK(message_of("[model]\nwat = 3\n").find("unknown key 'wat'") != std::string::npos);
    CHECK(message_of("[model]\nepochs = soon\n").find("line 2") != std::string::npos);
    CHECK(message_of("[model]\nepochs = soon\n").find("expected an integer") !=
          std::string::npos);
    CHECK(message_of("epochs = 3\n").find("before any [section]") != std::string::npos);
    CHECK(message_of("[model]\nepochs\n").find("expected 'key = value'") != std::string::npos);
    CHECK(message_of("[model\n").find("unterminated") != std::string::npos);
    CHECK(message_of("[augment]\nuse_degree = maybe\n").find("true/false") != std::string::npos);
}

TEST_CASE("environment overrides win over the file") {
    RunConfig cfg = parse_config_text("[model]\nepochs = 10\nhidden_dim = 32\n");
    apply_overrides(cfg, {{"GRAPHGEN_MODEL_EPOCHS", "7"},
                          {"GRAPHGEN_OUTPUT_DIR", "elsewhere"},
                          {"UNRELATED", "ignored"}});
    CHECK(cfg.model.epochs == 7);
    CHECK(cfg.model.hidden_dim == 32);
    CHECK(cfg.output_dir == "elsewhere");

    CHECK_THROWS_AS(apply_overrides(cfg, {{"GRAPHGEN_MODEL_EPOCHS", "x"}}), ConfigError);
}

TEST_CASE("config text round-trips through the parser") {
    RunConfig cfg;
    cfg.dataset = "somewhere.txt";
    cfg.model.epochs = 17;
    cfg.model.dropout = 0.125;
    cfg.model.optimizer.lr = 0.0005;
    cfg.augment.use_clustering = true;
    cfg.metrics.sigma = 1.5;
    cfg.generate_count = 10;

    std::string text = config_to_text(cfg);
    RunConfig back = parse_config_text(text);
    CHECK(config_to_text(back) == text);
    CHECK(back.model.epochs == 17);
    CHECK(back.model.dropout == 0.125);
    CHECK(back.model.optimizer.lr == 0.0005);
    CHECK(back.augment.use_clustering);
    CHECK(back.metrics.sigma == 1.5);
}

TEST_CASE("load_config reads files and reports missing ones") {
    std::string path =
        (std::filesystem::temp_directory_path() / "graphgen_config_test.cfg").string();
    {
        std::ofstream out(path, std::ios::trunc);
        out << "[model]\nepochs = 3\n";
    }
    RunConfig cfg = load_config(path);
    CHECK(cfg.model.epochs == 3);
    std::remove(path.c_str());

    CHECK_THROWS_AS(load_config("/nonexistent/graphgen.cfg"), ConfigError);
}
