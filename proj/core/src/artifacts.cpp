#include "qgcn/artifacts.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qgcn {

namespace {

constexpr char kDatasetMagic[8] = {'Q', 'G', 'C', 'N', 'D', 'S', '1', '\0'};

void write_u32(std::ostream &out, std::uint32_t v) {
    unsigned char buf[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                            static_cast<unsigned char>(v >> 16),
                            static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char *>(buf), 4);
}

void write_u64(std::ostream &out, std::uint64_t v) {
    write_u32(out, static_cast<std::uint32_t>(v));
    write_u32(out, static_cast<std::uint32_t>(v >> 32));
}

void write_f64(std::ostream &out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    write_u64(out, bits);
}

std::uint32_t read_u32(std::istream &in) {
    unsigned char buf[4];
    in.read(reinterpret_cast<char *>(buf), 4);
    if (!in) {
        throw Error("truncated dataset artifact");
    }
    return std::uint32_t{buf[0]} | (std::uint32_t{buf[1]} << 8) |
           (std::uint32_t{buf[2]} << 16) | (std::uint32_t{buf[3]} << 24);
}

std::uint64_t read_u64(std::istream &in) {
    const std::uint64_t lo = read_u32(in);
    const std::uint64_t hi = read_u32(in);
    return lo | (hi << 32);
}

double read_f64(std::istream &in) {
    const std::uint64_t bits = read_u64(in);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

void write_split(std::ostream &out, const SampleSet &set) {
    for (const Sample &s : set.samples) {
        write_u32(out, static_cast<std::uint32_t>(s.label == 1 ? 1 : 0));
        write_u32(out, s.source_index);
        for (const auto &node : s.graph.node_features) {
            for (double f : node) {
                write_f64(out, f);
            }
        }
    }
}

SampleSet read_split(std::istream &in, std::uint32_t count, const SampleSet &proto,
                     const Graph &graph_shape, int feature_dim) {
    SampleSet set = proto;
    for (std::uint32_t i = 0; i < count; ++i) {
        Sample s;
        s.label = read_u32(in) == 1 ? 1 : -1;
        s.source_index = read_u32(in);
        s.graph = graph_shape;
        for (auto &node : s.graph.node_features) {
            node.resize(feature_dim);
            for (double &f : node) {
                f = read_f64(in);
            }
        }
        set.samples.push_back(std::move(s));
    }
    return set;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

void save_dataset_artifact(const std::string &path, const SampleSet &train,
                           const SampleSet &test) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write dataset artifact: " + path);
    }
    out.write(kDatasetMagic, 8);
    write_u32(out, kDatasetFormatVersion);
    write_u64(out, train.seed);
    for (int id : train.node_selection) {
        write_u32(out, static_cast<std::uint32_t>(id));
    }
    write_u32(out, static_cast<std::uint32_t>(train.positive_digit));
    write_u32(out, static_cast<std::uint32_t>(train.negative_digit));
    write_u32(out, static_cast<std::uint32_t>(train.samples.size()));
    write_u32(out, static_cast<std::uint32_t>(test.samples.size()));

    const Graph &shape = train.samples.empty()
                             ? (test.samples.empty() ? Graph{} : test.samples[0].graph)
                             : train.samples[0].graph;
    write_u32(out, static_cast<std::uint32_t>(shape.n_nodes()));
    const int feature_dim =
        shape.n_nodes() > 0 ? static_cast<int>(shape.node_features[0].size()) : 0;
    write_u32(out, static_cast<std::uint32_t>(feature_dim));
    for (int id : shape.node_ids) {
        write_u32(out, static_cast<std::uint32_t>(id));
    }
    write_u32(out, static_cast<std::uint32_t>(shape.edges.size()));
    for (const auto &[u, v] : shape.edges) {
        write_u32(out, static_cast<std::uint32_t>(u));
        write_u32(out, static_cast<std::uint32_t>(v));
    }
    write_split(out, train);
    write_split(out, test);
    if (!out) {
        throw Error("write failure on dataset artifact: " + path);
    }
}

std::pair<SampleSet, SampleSet> load_dataset_artifact(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open dataset artifact: " + path);
    }
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kDatasetMagic, 8) != 0) {
        throw Error("not a dataset artifact: " + path);
    }
    const std::uint32_t version = read_u32(in);
    if (version != kDatasetFormatVersion) {
        throw Error("dataset artifact version " + std::to_string(version) +
                    " is unsupported (want " + std::to_string(kDatasetFormatVersion) + ")");
    }
    SampleSet proto;
    proto.seed = read_u64(in);
    for (int &id : proto.node_selection) {
        id = static_cast<int>(read_u32(in));
    }
    proto.positive_digit = static_cast<int>(read_u32(in));
    proto.negative_digit = static_cast<int>(read_u32(in));
    const std::uint32_t train_count = read_u32(in);
    const std::uint32_t test_count = read_u32(in);

    Graph shape;
    const std::uint32_t n_nodes = read_u32(in);
    const std::uint32_t feature_dim = read_u32(in);
    shape.node_features.assign(n_nodes, std::vector<double>(feature_dim, 0.0));
    for (std::uint32_t i = 0; i < n_nodes; ++i) {
        shape.node_ids.push_back(static_cast<int>(read_u32(in)));
    }
    const std::uint32_t n_edges = read_u32(in);
    for (std::uint32_t i = 0; i < n_edges; ++i) {
        const int u = static_cast<int>(read_u32(in));
        const int v = static_cast<int>(read_u32(in));
        shape.edges.insert({u, v});
    }

    auto train = read_split(in, train_count, proto, shape, static_cast<int>(feature_dim));
    auto test = read_split(in, test_count, proto, shape, static_cast<int>(feature_dim));
    return {std::move(train), std::move(test)};
}

std::string dataset_summary(const SampleSet &train, const SampleSet &test) {
    const auto count = [](const SampleSet &set, int label) {
        std::size_t n = 0;
        for (const Sample &s : set.samples) {
            n += s.label == label ? 1 : 0;
        }
        return n;
    };
    std::ostringstream out;
    out << "nodes: " << train.node_selection[0] << "," << train.node_selection[1] << ","
        << train.node_selection[2] << "\n"
        << "seed: " << train.seed << "\n"
        << "digits: +1=" << train.positive_digit << " -1=" << train.negative_digit << "\n"
        << "train: " << train.samples.size() << " (+1: " << count(train, 1)
        << ", -1: " << count(train, -1) << ")\n"
        << "test: " << test.samples.size() << " (+1: " << count(test, 1)
        << ", -1: " << count(test, -1) << ")\n";
    if (!train.samples.empty()) {
        const Graph &g = train.samples[0].graph;
        out << "edges:";
        for (const auto &[u, v] : g.edges) {
            out << " (" << g.node_ids[u] << "," << g.node_ids[v] << ")";
        }
        out << "\n";
    }
    return out.str();
}

void save_params(const std::string &path, const ParamsFile &params) {
    nlohmann::ordered_json j;
    j["format_version"] = params.format_version;
    j["model"]["conv"] = params.n_conv;
    j["model"]["pool"] = params.n_pool;
    j["model"]["mode"] = circuit_mode_name(params.mode);
    j["model"]["nodes"] = params.node_selection;
    j["values"] = params.values;
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write params file: " + path);
    }
    out << j.dump(2) << "\n";
}

ParamsFile load_params(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open params file: " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception &e) {
        throw Error("malformed params file " + path + ": " + e.what());
    }
    ParamsFile p;
    p.format_version = j.at("format_version").get<int>();
    if (p.format_version != kParamsFormatVersion) {
        throw Error("params file version " + std::to_string(p.format_version) +
                    " is unsupported");
    }
    p.n_conv = j.at("model").at("conv").get<int>();
    p.n_pool = j.at("model").at("pool").get<int>();
    p.mode = parse_circuit_mode(j.at("model").at("mode").get<std::string>());
    const auto nodes = j.at("model").at("nodes").get<std::vector<int>>();
    if (nodes.size() != 3) {
        throw Error("params file must name exactly 3 nodes");
    }
    std::copy(nodes.begin(), nodes.end(), p.node_selection.begin());
    p.values = j.at("values").get<std::vector<double>>();
    return p;
}

void save_metrics_csv(const std::string &path, const std::vector<MetricsRecord> &metrics) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write metrics file: " + path);
    }
    out << "iteration,train_loss,train_accuracy,test_accuracy,wall_time_s\n";
    for (const MetricsRecord &m : metrics) {
        out << m.iteration << "," << format_double(m.train_loss) << ","
            << format_double(m.train_accuracy) << "," << format_double(m.test_accuracy)
            << "," << format_double(m.wall_time) << "\n";
    }
}

std::vector<MetricsRecord> load_metrics_csv(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open metrics file: " + path);
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw Error("empty metrics file: " + path);
    }
    std::vector<MetricsRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        MetricsRecord m;
        std::istringstream row(line);
        std::string field;
        std::getline(row, field, ',');
        m.iteration = std::stoi(field);
        std::getline(row, field, ',');
        m.train_loss = std::stod(field);
        std::getline(row, field, ',');
        m.train_accuracy = std::stod(field);
        std::getline(row, field, ',');
        m.test_accuracy = std::stod(field);
        std::getline(row, field, ',');
        m.wall_time = std::stod(field);
        out.push_back(m);
    }
    return out;
}

} // namespace qgcn
