#include "qgcn/encoding.hpp"

#include <algorithm>
#include <cmath>

namespace qgcn {

namespace {

int width_for_dim(int dim) {
    int width = 0;
    while ((1 << width) < dim) {
        ++width;
    }
    return std::max(width, 1);
}

std::pair<int, int> canonical(int u, int v) { return {std::min(u, v), std::max(u, v)}; }

} // namespace

int EncodedRegisterPlan::node_qubit(int node, int offset) const {
    for (const NodeRegister &r : node_registers) {
        if (r.node == node) {
            if (offset < 0 || offset >= r.width) {
                throw Error("register offset " + std::to_string(offset) + " out of range");
            }
            // Offsets follow the register's big-endian amplitude order:
            // offset 0 is the leading (most significant) qubit.
            return r.first_qubit + r.width - 1 - offset;
        }
    }
    throw Error("node " + std::to_string(node) + " has no register in the plan");
}

int EncodedRegisterPlan::edge_qubit(int u, int v) const {
    const auto key = canonical(u, v);
    for (const EdgeQubit &e : edge_qubits) {
        if (e.nodes == key) {
            return e.qubit;
        }
    }
    throw Error("pair (" + std::to_string(u) + "," + std::to_string(v) +
                ") has no edge qubit in the plan");
}

EncodedRegisterPlan make_register_plan(int n_nodes, int feature_dim, bool edge_register) {
    if (n_nodes < 1) {
        throw Error("plan needs at least one node");
    }
    const int width = width_for_dim(feature_dim);
    EncodedRegisterPlan plan;
    const int n_pairs = edge_register ? n_nodes * (n_nodes - 1) / 2 : 0;
    for (int i = 0; i < n_nodes; ++i) {
        plan.node_registers.push_back({i, n_pairs + width * (n_nodes - 1 - i), width});
    }
    if (edge_register) {
        int next = n_pairs - 1;
        for (int u = 0; u < n_nodes; ++u) {
            for (int v = u + 1; v < n_nodes; ++v) {
                plan.edge_qubits.push_back({{u, v}, next--});
            }
        }
    }
    plan.total_qubits = width * n_nodes + n_pairs;
    return plan;
}

StateVector amplitude_encode(std::span<const double> x, std::optional<double> slack) {
    std::vector<double> v(x.begin(), x.end());
    if (slack) {
        v.push_back(*slack);
    }
    double norm_sq = 0.0;
    for (double e : v) {
        norm_sq += e * e;
    }
    if (norm_sq == 0.0) {
        throw Error("unencodable input: all-zero vector");
    }
    const double inv_norm = 1.0 / std::sqrt(norm_sq);
    const int width = width_for_dim(static_cast<int>(v.size()));
    std::vector<complex> amps(std::uint64_t{1} << width, complex(0, 0));
    for (std::size_t j = 0; j < v.size(); ++j) {
        amps[j] = complex(v[j] * inv_norm, 0);
    }
    return StateVector(width, std::move(amps));
}

StateVector encode_graph_input(const std::vector<std::vector<double>> &features,
                               const EncodedRegisterPlan &plan,
                               const std::set<std::pair<int, int>> &edges) {
    if (features.size() != plan.node_registers.size()) {
        throw Error("feature count does not match the register plan");
    }
    StateVector state = amplitude_encode(features[0]);
    if (state.n_qubits() != plan.node_registers[0].width) {
        throw Error("node 0 features do not fit its register");
    }
    for (std::size_t i = 1; i < features.size(); ++i) {
        StateVector reg = amplitude_encode(features[i]);
        if (reg.n_qubits() != plan.node_registers[i].width) {
            throw Error("node " + std::to_string(i) + " features do not fit its register");
        }
        state = tensor_product(state, reg);
    }
    if (!plan.edge_qubits.empty()) {
        for (const auto &e : edges) {
            if (canonical(e.first, e.second) != e) {
                throw Error("edge pairs must be stored (min,max)");
            }
            plan.edge_qubit(e.first, e.second); // throws if the pair is unknown
        }
        for (const auto &eq : plan.edge_qubits) {
            state = tensor_product(state, StateVector::basis_state(1, edges.count(eq.nodes)));
        }
    }
    return state;
}

} // namespace qgcn
