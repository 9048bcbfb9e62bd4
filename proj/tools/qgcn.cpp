// qgcn: experiment runner for the patch-graph quantum classifier.
// Subcommands: prepare (IDX -> dataset artifact), train (artifact ->
// metrics.csv + params.json), evaluate (params + artifact -> accuracy
// report).
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "qgcn/artifacts.hpp"
#include "qgcn/dataset.hpp"
#include "qgcn/model.hpp"
#include "qgcn/training.hpp"

namespace fs = std::filesystem;
using namespace qgcn;

namespace {

constexpr int kExitError = 1;
constexpr int kExitDiverged = 2;

int resolve_workers(int requested) {
    if (requested > 0) {
        return requested;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

std::array<int, 3> parse_nodes(const std::string &spec) {
    std::array<int, 3> out{};
    std::istringstream in(spec);
    std::string field;
    for (int i = 0; i < 3; ++i) {
        if (!std::getline(in, field, ',')) {
            throw Error("--nodes wants three comma-separated patch ids, got '" + spec + "'");
        }
        out[i] = std::stoi(field);
    }
    if (std::getline(in, field, ',')) {
        throw Error("--nodes wants exactly three patch ids");
    }
    return out;
}

struct PrepareOptions {
    std::string images;
    std::string labels;
    std::string nodes = "0,2,3";
    std::uint64_t seed = 0;
    int train_size = 480;
    int test_size = 120;
    int positive_digit = 3;
    int negative_digit = 6;
    bool unbalanced = false;
    std::string out_dir = ".";
};

int run_prepare(const PrepareOptions &opt) {
    SampleSetConfig cfg;
    cfg.node_selection = parse_nodes(opt.nodes);
    cfg.seed = opt.seed;
    cfg.train_size = opt.train_size;
    cfg.test_size = opt.test_size;
    cfg.positive_digit = opt.positive_digit;
    cfg.negative_digit = opt.negative_digit;
    cfg.balanced = !opt.unbalanced;

    const auto raw = parse_idx_files(opt.images, opt.labels);
    auto [train, test] = build_sampleset(raw, cfg);

    fs::create_directories(opt.out_dir);
    const fs::path artifact = fs::path(opt.out_dir) / "dataset.qgs";
    save_dataset_artifact(artifact.string(), train, test);

    const std::string summary = dataset_summary(train, test);
    std::ofstream(fs::path(opt.out_dir) / "summary.txt") << summary;
    std::cout << "wrote " << artifact.string() << "\n" << summary;
    return 0;
}

struct TrainOptions {
    std::string dataset;
    std::string out_dir = ".";
    int n_conv = 1;
    int n_pool = 1;
    std::string mode = "compiled";
    std::string grad = "adjoint";
    std::string optimizer = "adam";
    int iterations = 1000;
    int batch = 16;
    double lr = 0.01;
    std::uint64_t seed = 0;
    int eval_interval = 10;
    int workers = 0;
};

struct LoadedSplit {
    std::vector<StateVector> inputs;
    std::vector<int> labels;
};

LoadedSplit encode_split(const BuiltModel &model, const SampleSet &set) {
    LoadedSplit out;
    for (const Sample &s : set.samples) {
        out.inputs.push_back(encode_input(model, s.graph));
        out.labels.push_back(s.label);
    }
    return out;
}

int run_train(const TrainOptions &opt) {
    auto [train_set, test_set] = load_dataset_artifact(opt.dataset);
    if (train_set.samples.empty()) {
        throw Error("dataset artifact has no training samples");
    }

    ModelSpec spec;
    spec.n_conv_layers = opt.n_conv;
    spec.n_pool_layers = opt.n_pool;
    spec.mode = parse_circuit_mode(opt.mode);
    const auto model = build_circuit(train_set.samples[0].graph, spec);

    const auto train_split = encode_split(model, train_set);
    const auto test_split = encode_split(model, test_set);

    TrainConfig cfg;
    cfg.iterations = opt.iterations;
    cfg.batch_size = opt.batch;
    cfg.learning_rate = opt.lr;
    cfg.optimizer = parse_optimizer(opt.optimizer);
    cfg.seed = opt.seed;
    cfg.gradient_mode = parse_gradient_mode(opt.grad);
    cfg.eval_interval = opt.eval_interval;
    cfg.workers = resolve_workers(opt.workers);

    const auto result = train(model, train_split.inputs, train_split.labels,
                              test_split.inputs, test_split.labels, cfg);

    fs::create_directories(opt.out_dir);
    save_metrics_csv((fs::path(opt.out_dir) / "metrics.csv").string(), result.metrics);

    ParamsFile params;
    params.n_conv = opt.n_conv;
    params.n_pool = opt.n_pool;
    params.mode = spec.mode;
    params.node_selection = train_set.node_selection;
    params.values = result.params.values;
    save_params((fs::path(opt.out_dir) / "params.json").string(), params);

    const auto &last = result.metrics.back();
    std::cout << "iterations: " << last.iteration << "\n"
              << "final train loss: " << last.train_loss << "\n"
              << "train accuracy: " << last.train_accuracy << "\n"
              << "test accuracy: " << last.test_accuracy << "\n"
              << "params: " << params.values.size() << " -> "
              << (fs::path(opt.out_dir) / "params.json").string() << "\n";
    return 0;
}

struct EvaluateOptions {
    std::string params;
    std::string dataset;
    std::string out_dir;
    int workers = 0;
};

int run_evaluate(const EvaluateOptions &opt) {
    const ParamsFile params = load_params(opt.params);
    auto [train_set, test_set] = load_dataset_artifact(opt.dataset);
    if (test_set.samples.empty()) {
        throw Error("dataset artifact has an empty test set");
    }
    if (params.node_selection != test_set.node_selection) {
        throw Error("params were trained on nodes " + std::to_string(params.node_selection[0]) +
                    "," + std::to_string(params.node_selection[1]) + "," +
                    std::to_string(params.node_selection[2]) +
                    " but the artifact selects different patches");
    }

    ModelSpec spec;
    spec.n_conv_layers = params.n_conv;
    spec.n_pool_layers = params.n_pool;
    spec.mode = params.mode;
    const auto model = build_circuit(test_set.samples[0].graph, spec);
    if (static_cast<int>(params.values.size()) != model.n_params) {
        throw Error("params file holds " + std::to_string(params.values.size()) +
                    " values but the model wants " + std::to_string(model.n_params));
    }

    const auto split = encode_split(model, test_set);
    const auto preds = predict(model, params.values, split.inputs, resolve_workers(opt.workers));

    // Confusion counts: [actual +1/-1][predicted +1/-1].
    int tp = 0, fn = 0, fp = 0, tn = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const int predicted = classify(preds[i]);
        if (split.labels[i] == 1) {
            (predicted == 1 ? tp : fn)++;
        } else {
            (predicted == -1 ? tn : fp)++;
        }
    }
    const double acc = static_cast<double>(tp + tn) / static_cast<double>(preds.size());
    const double pos_acc = tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
    const double neg_acc = tn + fp > 0 ? static_cast<double>(tn) / (tn + fp) : 0.0;

    std::ostringstream report;
    report << "samples: " << preds.size() << "\n"
           << "accuracy: " << acc << "\n"
           << "positive-class accuracy: " << pos_acc << "\n"
           << "negative-class accuracy: " << neg_acc << "\n"
           << "confusion: tp=" << tp << " fn=" << fn << " fp=" << fp << " tn=" << tn << "\n";
    std::cout << report.str();

    if (!opt.out_dir.empty()) {
        fs::create_directories(opt.out_dir);
        std::ofstream(fs::path(opt.out_dir) / "report.txt") << report.str();
        nlohmann::ordered_json j;
        j["samples"] = preds.size();
        j["accuracy"] = acc;
        j["positive_class_accuracy"] = pos_acc;
        j["negative_class_accuracy"] = neg_acc;
        j["confusion"] = {{"tp", tp}, {"fn", fn}, {"fp", fp}, {"tn", tn}};
        std::ofstream((fs::path(opt.out_dir) / "report.json")) << j.dump(2) << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Patch-graph quantum classifier experiment runner"};
    app.require_subcommand(1);

    PrepareOptions prep;
    auto *prepare = app.add_subcommand("prepare", "Build the dataset artifact from IDX files");
    prepare->set_config("--config");
    prepare->add_option("--images", prep.images, "IDX images file")->required();
    prepare->add_option("--labels", prep.labels, "IDX labels file")->required();
    prepare->add_option("--nodes", prep.nodes, "three patch ids, e.g. 0,2,3");
    prepare->add_option("--seed", prep.seed, "selection seed");
    prepare->add_option("--train-size", prep.train_size, "training sample count");
    prepare->add_option("--test-size", prep.test_size, "test sample count");
    prepare->add_option("--positive-digit", prep.positive_digit, "digit labelled +1");
    prepare->add_option("--negative-digit", prep.negative_digit, "digit labelled -1");
    prepare->add_flag("--unbalanced", prep.unbalanced, "skip per-class balancing");
    prepare->add_option("--out", prep.out_dir, "output directory");

    TrainOptions tr;
    auto *train_cmd = app.add_subcommand("train", "Train on a dataset artifact");
    train_cmd->set_config("--config");
    train_cmd->add_option("--dataset", tr.dataset, "dataset artifact path")->required();
    train_cmd->add_option("--conv", tr.n_conv, "conv layer count");
    train_cmd->add_option("--pool", tr.n_pool, "pool layer count");
    train_cmd->add_option("--mode", tr.mode, "compiled|edge-register");
    train_cmd->add_option("--iterations", tr.iterations, "optimizer steps");
    train_cmd->add_option("--batch", tr.batch, "mini-batch size");
    train_cmd->add_option("--lr", tr.lr, "learning rate");
    train_cmd->add_option("--grad", tr.grad, "shift|adjoint|fd");
    train_cmd->add_option("--optimizer", tr.optimizer, "adam|sgd");
    train_cmd->add_option("--seed", tr.seed, "training seed");
    train_cmd->add_option("--eval-interval", tr.eval_interval, "full-set accuracy cadence");
    train_cmd->add_option("--workers", tr.workers, "parallel circuit evaluations (0 = all cores)")
        ->envname("QGCN_WORKERS");
    train_cmd->add_option("--out", tr.out_dir, "output directory");

    EvaluateOptions ev;
    auto *eval_cmd = app.add_subcommand("evaluate", "Score a params file on a test split");
    eval_cmd->set_config("--config");
    eval_cmd->add_option("--params", ev.params, "params.json path")->required();
    eval_cmd->add_option("--dataset", ev.dataset, "dataset artifact path")->required();
    eval_cmd->add_option("--out", ev.out_dir, "optional report directory");
    eval_cmd->add_option("--workers", ev.workers, "parallel circuit evaluations (0 = all cores)")
        ->envname("QGCN_WORKERS");

    CLI11_PARSE(app, argc, argv);

    try {
        if (prepare->parsed()) {
            return run_prepare(prep);
        }
        if (train_cmd->parsed()) {
            return run_train(tr);
        }
        return run_evaluate(ev);
    } catch (const DivergenceError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDiverged;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}
