// Artifact round-trips and end-to-end CLI runs on synthetic fixture data.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "qgcn/artifacts.hpp"
#include "qgcn/dataset.hpp"
#include "qgcn/model.hpp"
#include "qgcn/training.hpp"

using namespace qgcn;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string &name) {
    const fs::path dir = fs::temp_directory_path() / ("qgcn_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void put_be32(std::ostream &out, std::uint32_t v) {
    const unsigned char bytes[4] = {static_cast<unsigned char>(v >> 24),
                                    static_cast<unsigned char>(v >> 16),
                                    static_cast<unsigned char>(v >> 8),
                                    static_cast<unsigned char>(v)};
    out.write(reinterpret_cast<const char *>(bytes), 4);
}

/// Synthetic IDX pair: `count` images alternating between labels 3 and 6,
/// with class-dependent intensity layout so a classifier has signal (threes
/// bright on the left, sixes bright on the right) plus per-image noise.
void write_fixture_idx(const fs::path &images_path, const fs::path &labels_path,
                       int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> noise(0, 60);
    std::ofstream images(images_path, std::ios::binary);
    std::ofstream labels(labels_path, std::ios::binary);
    put_be32(images, 0x00000803);
    put_be32(images, static_cast<std::uint32_t>(count));
    put_be32(images, 28);
    put_be32(images, 28);
    put_be32(labels, 0x00000801);
    put_be32(labels, static_cast<std::uint32_t>(count));
    for (int i = 0; i < count; ++i) {
        const int digit = i % 2 == 0 ? 3 : 6;
        for (int row = 0; row < 28; ++row) {
            for (int col = 0; col < 28; ++col) {
                const bool bright = digit == 3 ? col < 14 : col >= 14;
                const int value = (bright ? 180 : 20) + noise(rng);
                images.put(static_cast<char>(value));
            }
        }
        labels.put(static_cast<char>(digit));
    }
}

std::pair<SampleSet, SampleSet> fixture_samplesets(const fs::path &dir, int train_size,
                                                   int test_size) {
    const fs::path images = dir / "images-idx3-ubyte";
    const fs::path labels = dir / "labels-idx1-ubyte";
    write_fixture_idx(images, labels, 2 * (train_size + test_size) + 40, 7);
    SampleSetConfig cfg;
    cfg.train_size = train_size;
    cfg.test_size = test_size;
    cfg.seed = 11;
    return build_sampleset(parse_idx_files(images.string(), labels.string()), cfg);
}

std::string slurp(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

/// metrics.csv with the wall_time column blanked, for determinism checks.
std::string metrics_without_walltime(const fs::path &path) {
    std::istringstream in(slurp(path));
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        const auto cut = line.rfind(',');
        out << line.substr(0, cut) << "\n";
    }
    return out.str();
}

int run_cli(const std::string &args) {
    const std::string cmd = std::string(QGCN_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST_CASE("dataset artifact round-trips exactly") {
    const fs::path dir = fresh_dir("artifact");
    auto [train, test] = fixture_samplesets(dir, 24, 8);

    const fs::path path = dir / "dataset.qgs";
    save_dataset_artifact(path.string(), train, test);
    auto [train2, test2] = load_dataset_artifact(path.string());

    const auto check_split = [](const SampleSet &a, const SampleSet &b) {
        REQUIRE(b.samples.size() == a.samples.size());
        CHECK(b.node_selection == a.node_selection);
        CHECK(b.seed == a.seed);
        CHECK(b.positive_digit == a.positive_digit);
        CHECK(b.negative_digit == a.negative_digit);
        for (std::size_t i = 0; i < a.samples.size(); ++i) {
            CHECK(b.samples[i].label == a.samples[i].label);
            CHECK(b.samples[i].source_index == a.samples[i].source_index);
            CHECK(b.samples[i].graph.edges == a.samples[i].graph.edges);
            CHECK(b.samples[i].graph.node_ids == a.samples[i].graph.node_ids);
            REQUIRE(b.samples[i].graph.node_features == a.samples[i].graph.node_features);
        }
    };
    check_split(train, train2);
    check_split(test, test2);
}

TEST_CASE("dataset artifact loader rejects junk") {
    const fs::path dir = fresh_dir("artifact_bad");
    std::ofstream(dir / "bad.qgs") << "not an artifact";
    CHECK_THROWS_AS(load_dataset_artifact((dir / "bad.qgs").string()), Error);
    CHECK_THROWS_AS(load_dataset_artifact((dir / "missing.qgs").string()), Error);
}

TEST_CASE("params file write-read-write is byte-identical") {
    const fs::path dir = fresh_dir("params");
    ParamsFile params;
    params.n_conv = 2;
    params.n_pool = 1;
    params.mode = CircuitMode::EdgeRegister;
    params.node_selection = {1, 2, 3};
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int i = 0; i < 36; ++i) {
        params.values.push_back(dist(rng));
    }

    const fs::path first = dir / "params.json";
    const fs::path second = dir / "params2.json";
    save_params(first.string(), params);
    const ParamsFile loaded = load_params(first.string());
    save_params(second.string(), loaded);

    CHECK(loaded.format_version == params.format_version);
    CHECK(loaded.n_conv == params.n_conv);
    CHECK(loaded.n_pool == params.n_pool);
    CHECK(loaded.mode == params.mode);
    CHECK(loaded.node_selection == params.node_selection);
    REQUIRE(loaded.values == params.values);
    CHECK(slurp(second) == slurp(first));
}

TEST_CASE("metrics csv parses back to the exact doubles") {
    const fs::path dir = fresh_dir("metrics");
    std::vector<MetricsRecord> metrics;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int i = 0; i < 17; ++i) {
        metrics.push_back({i, dist(rng), dist(rng), dist(rng), dist(rng) * 100.0});
    }
    const fs::path path = dir / "metrics.csv";
    save_metrics_csv(path.string(), metrics);
    const auto loaded = load_metrics_csv(path.string());
    REQUIRE(loaded.size() == metrics.size());
    for (std::size_t i = 0; i < metrics.size(); ++i) {
        CHECK(loaded[i].iteration == metrics[i].iteration);
        CHECK(loaded[i].train_loss == metrics[i].train_loss);
        CHECK(loaded[i].train_accuracy == metrics[i].train_accuracy);
        CHECK(loaded[i].test_accuracy == metrics[i].test_accuracy);
        CHECK(loaded[i].wall_time == metrics[i].wall_time);
    }
}

TEST_CASE("cli pipeline: prepare, train, evaluate") {
    const fs::path dir = fresh_dir("pipeline");
    const fs::path images = dir / "images-idx3-ubyte";
    const fs::path labels = dir / "labels-idx1-ubyte";
    write_fixture_idx(images, labels, 160, 21);

    const std::string prep = "prepare --images " + images.string() + " --labels " +
                             labels.string() + " --train-size 32 --test-size 16 --out " +
                             (dir / "data").string();
    REQUIRE(run_cli(prep) == 0);
    REQUIRE(fs::exists(dir / "data" / "dataset.qgs"));
    REQUIRE(fs::exists(dir / "data" / "summary.txt"));

    const std::string dataset = (dir / "data" / "dataset.qgs").string();
    const std::string train_args = "train --dataset " + dataset +
                                   " --iterations 6 --batch 8 --seed 4 --workers 1 --out ";
    REQUIRE(run_cli(train_args + (dir / "run_a").string()) == 0);
    REQUIRE(fs::exists(dir / "run_a" / "metrics.csv"));
    REQUIRE(fs::exists(dir / "run_a" / "params.json"));

    SUBCASE("same seed reproduces metrics modulo wall time") {
        REQUIRE(run_cli(train_args + (dir / "run_b").string()) == 0);
        CHECK(metrics_without_walltime(dir / "run_a" / "metrics.csv") ==
              metrics_without_walltime(dir / "run_b" / "metrics.csv"));
        CHECK(slurp(dir / "run_a" / "params.json") == slurp(dir / "run_b" / "params.json"));
    }

    SUBCASE("zero iterations records only the initial evaluation") {
        REQUIRE(run_cli("train --dataset " + dataset + " --iterations 0 --out " +
                        (dir / "run_zero").string()) == 0);
        const auto metrics = load_metrics_csv((dir / "run_zero" / "metrics.csv").string());
        REQUIRE(metrics.size() == 1);
        CHECK(metrics[0].iteration == 0);
    }

    SUBCASE("evaluate reports and exits cleanly") {
        REQUIRE(run_cli("evaluate --params " + (dir / "run_a" / "params.json").string() +
                        " --dataset " + dataset + " --out " + (dir / "eval").string()) == 0);
        const std::string report = slurp(dir / "eval" / "report.txt");
        CHECK(report.find("samples: 16") != std::string::npos);
        CHECK(report.find("accuracy:") != std::string::npos);
        CHECK(fs::exists(dir / "eval" / "report.json"));
    }

    SUBCASE("evaluate rejects a mismatched params file") {
        ParamsFile wrong = load_params((dir / "run_a" / "params.json").string());
        wrong.n_conv = 2; // claims 36 params but carries 21 values
        save_params((dir / "bad_params.json").string(), wrong);
        CHECK(run_cli("evaluate --params " + (dir / "bad_params.json").string() +
                      " --dataset " + dataset) == 1);
    }
}

TEST_CASE("cli error paths exit with status 1") {
    const fs::path dir = fresh_dir("errors");
    CHECK(run_cli("prepare --images /nonexistent --labels /nonexistent") == 1);
    CHECK(run_cli("train --dataset /nonexistent.qgs") == 1);

    // Truncated image payload.
    const fs::path images = dir / "images-idx3-ubyte";
    const fs::path labels = dir / "labels-idx1-ubyte";
    write_fixture_idx(images, labels, 8, 1);
    fs::resize_file(images, 16 + 3 * 784);
    CHECK(run_cli("prepare --images " + images.string() + " --labels " + labels.string() +
                  " --out " + (dir / "out").string()) == 1);
}

TEST_CASE("random params score near chance on a balanced split") {
    const fs::path dir = fresh_dir("chance");
    auto [train, test] = fixture_samplesets(dir, 16, 60);
    ModelSpec spec;
    const auto model = build_circuit(test.samples[0].graph, spec);

    std::vector<StateVector> inputs;
    std::vector<int> labels;
    for (const Sample &s : test.samples) {
        inputs.push_back(encode_input(model, s.graph));
        labels.push_back(s.label);
    }

    // Average accuracy over independent random parameter draws; each draw
    // may be biased toward one class, but the mean sits near 0.5.
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> dist(-3.14159, 3.14159);
    double total = 0.0;
    const int draws = 20;
    for (int d = 0; d < draws; ++d) {
        std::vector<double> params(static_cast<std::size_t>(model.n_params));
        for (double &v : params) {
            v = dist(rng);
        }
        total += accuracy(predict(model, params, inputs), labels);
    }
    const double mean = total / draws;
    CHECK(mean > 0.3);
    CHECK(mean < 0.7);
}
