#include "qgcn/model.hpp"

#include <algorithm>

#include "qgcn/gates.hpp"

namespace qgcn {

void Graph::validate() const {
    if (node_features.empty()) {
        throw Error("graph has no nodes");
    }
    for (const auto &e : edges) {
        if (e.first < 0 || e.second >= n_nodes() || e.first >= e.second) {
            throw Error("bad edge (" + std::to_string(e.first) + "," +
                        std::to_string(e.second) + ")");
        }
    }
}

int Graph::degree(int node) const {
    int d = 0;
    for (const auto &e : edges) {
        d += (e.first == node || e.second == node) ? 1 : 0;
    }
    return d;
}

CircuitMode parse_circuit_mode(const std::string &name) {
    if (name == "compiled") {
        return CircuitMode::Compiled;
    }
    if (name == "edge-register") {
        return CircuitMode::EdgeRegister;
    }
    throw Error("unknown circuit mode '" + name + "'");
}

const char *circuit_mode_name(CircuitMode mode) {
    return mode == CircuitMode::Compiled ? "compiled" : "edge-register";
}

namespace {

int pick_root(const Graph &graph) {
    int root = 0;
    int best = -1;
    for (int v = 0; v < graph.n_nodes(); ++v) {
        const int d = graph.degree(v);
        if (d > best) {
            best = d;
            root = v;
        }
    }
    return root;
}

std::array<Angle, kConvUnitParams> conv_slots(int base) {
    std::array<Angle, kConvUnitParams> out;
    for (int i = 0; i < kConvUnitParams; ++i) {
        out[i] = Angle::bound(base + i);
    }
    return out;
}

std::array<Angle, kPoolUnitParams> pool_slots(int base) {
    std::array<Angle, kPoolUnitParams> out;
    for (int i = 0; i < kPoolUnitParams; ++i) {
        out[i] = Angle::bound(base + i);
    }
    return out;
}

void append(std::vector<GateInstance> &into, std::vector<GateInstance> gates) {
    into.insert(into.end(), std::make_move_iterator(gates.begin()),
                std::make_move_iterator(gates.end()));
}

} // namespace

BuiltModel build_circuit(const Graph &graph, const ModelSpec &spec) {
    graph.validate();
    if (spec.n_conv_layers < 1) {
        throw Error("model needs at least one conv layer");
    }
    if (spec.n_pool_layers >= 1 && graph.n_nodes() < 2) {
        throw Error("pooling needs at least two nodes");
    }

    const int feature_dim = static_cast<int>(graph.node_features[0].size());
    for (const auto &f : graph.node_features) {
        if (static_cast<int>(f.size()) != feature_dim) {
            throw Error("all nodes must share one feature dimension");
        }
    }

    BuiltModel model;
    model.plan = make_register_plan(graph.n_nodes(), feature_dim,
                                    spec.mode == CircuitMode::EdgeRegister);
    model.circuit.n_qubits = model.plan.total_qubits;
    model.edges = graph.edges;
    model.root_node = pick_root(graph);

    const int width = model.plan.register_width();
    int next_slot = 0;

    for (int layer = 0; layer < spec.n_conv_layers; ++layer) {
        const auto slots = conv_slots(next_slot);
        next_slot += kConvUnitParams;
        if (spec.mode == CircuitMode::EdgeRegister) {
            // Full pair universe; absent edges stay inert through their
            // |0> control qubit.
            for (int u = 0; u < graph.n_nodes(); ++u) {
                for (int v = u + 1; v < graph.n_nodes(); ++v) {
                    const int ctrl = model.plan.edge_qubit(u, v);
                    for (int k = 0; k < width; ++k) {
                        append(model.circuit.gates,
                               conv_unit(slots, model.plan.node_qubit(u, k),
                                         model.plan.node_qubit(v, k), {ctrl}));
                    }
                }
            }
        } else {
            for (const auto &[u, v] : graph.edges) {
                for (int k = 0; k < width; ++k) {
                    append(model.circuit.gates,
                           conv_unit(slots, model.plan.node_qubit(u, k),
                                     model.plan.node_qubit(v, k)));
                }
            }
        }
    }

    for (int layer = 0; layer < spec.n_pool_layers; ++layer) {
        const auto slots = pool_slots(next_slot);
        next_slot += kPoolUnitParams;
        for (int w = 0; w < graph.n_nodes(); ++w) {
            if (w == model.root_node) {
                continue;
            }
            for (int k = 0; k < width; ++k) {
                append(model.circuit.gates,
                       pool_unit(slots, model.plan.node_qubit(w, k),
                                 model.plan.node_qubit(model.root_node, k)));
            }
        }
    }

    model.n_params = next_slot;
    const int readout_node = spec.readout_node < 0 ? model.root_node : spec.readout_node;
    model.readout_qubit = model.plan.node_qubit(readout_node, spec.readout_offset);
    return model;
}

StateVector encode_input(const BuiltModel &model, const Graph &graph) {
    return encode_graph_input(graph.node_features, model.plan, graph.edges);
}

double forward(const BuiltModel &model, std::span<const double> params,
               const StateVector &input) {
    if (static_cast<int>(params.size()) != model.n_params) {
        throw Error("expected " + std::to_string(model.n_params) + " parameters, got " +
                    std::to_string(params.size()));
    }
    StateVector state = input;
    apply_circuit(state, model.circuit, params);
    return expectation_z(state, model.readout_qubit);
}

int classify(double expectation) { return expectation >= 0.0 ? 1 : -1; }

} // namespace qgcn
