#pragma once

#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "qgcn/statevector.hpp"

namespace qgcn {

/// Qubit layout for a graph input. Node registers are tensored in node order
/// (node 0 ends up in the highest qubits), edge qubits are appended after
/// them in canonical pair order, so the first pair sits just below the node
/// registers and the last pair is qubit 0.
struct EncodedRegisterPlan {
    struct NodeRegister {
        int node;
        int first_qubit;
        int width;
    };
    struct EdgeQubit {
        std::pair<int, int> nodes;
        int qubit;
    };

    std::vector<NodeRegister> node_registers;
    std::vector<EdgeQubit> edge_qubits;
    int total_qubits = 0;

    /// Qubit at `offset` within a node's register, counted in big-endian
    /// amplitude order: offset 0 is the register's leading qubit.
    int node_qubit(int node, int offset) const;
    int edge_qubit(int u, int v) const;
    int register_width() const { return node_registers.empty() ? 0 : node_registers[0].width; }
};

/// Lays out `n_nodes` registers of ceil(log2(feature_dim padded)) qubits
/// each, plus one edge qubit per unordered node pair when `edge_register`.
EncodedRegisterPlan make_register_plan(int n_nodes, int feature_dim, bool edge_register);

/// Amplitude encoding: pad to the next power-of-two length, divide by the
/// Euclidean norm, place entry j on basis index j. An all-zero vector is
/// unencodable. When `slack` is given, it is appended as an extra coordinate
/// before normalization so the global scale survives.
StateVector amplitude_encode(std::span<const double> x,
                             std::optional<double> slack = std::nullopt);

/// Tensor product of the per-node encodings in plan order, followed by the
/// edge qubits prepared |1> for present edges and |0> otherwise.
StateVector encode_graph_input(const std::vector<std::vector<double>> &features,
                               const EncodedRegisterPlan &plan,
                               const std::set<std::pair<int, int>> &edges);

} // namespace qgcn
