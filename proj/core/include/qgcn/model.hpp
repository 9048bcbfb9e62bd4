#pragma once

#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qgcn/encoding.hpp"
#include "qgcn/statevector.hpp"

namespace qgcn {

/// Classical graph input: per-node feature vectors plus an undirected edge
/// list over node indices. `node_ids` keeps the original patch numbers.
struct Graph {
    std::vector<std::vector<double>> node_features;
    std::set<std::pair<int, int>> edges;
    std::vector<int> node_ids;

    int n_nodes() const { return static_cast<int>(node_features.size()); }
    void validate() const;
    int degree(int node) const;
};

enum class CircuitMode { Compiled, EdgeRegister };

CircuitMode parse_circuit_mode(const std::string &name);
const char *circuit_mode_name(CircuitMode mode);

struct ModelSpec {
    int n_conv_layers = 1;
    int n_pool_layers = 1;
    CircuitMode mode = CircuitMode::Compiled;
    /// Readout qubit as (node, register offset); negative node means
    /// "root node, offset 0".
    int readout_node = -1;
    int readout_offset = 0;
};

/// Flat trainable parameter vector. Sharing lives in the circuit: all units
/// of one layer bind to the same slot range.
struct ParamTable {
    std::vector<double> values;
};

struct BuiltModel {
    Circuit circuit;
    EncodedRegisterPlan plan;
    int n_params = 0;
    int root_node = 0;
    int readout_qubit = 0;
    std::set<std::pair<int, int>> edges;
};

/// Builds the layered circuit for a graph. Conv layer l walks the edges in
/// canonical order and couples register(u)[k] with register(v)[k] for every
/// offset k, all units bound to the layer's shared 15 slots; in edge-register
/// mode the walk covers every node pair and each unit is controlled on the
/// pair's edge qubit. Each pool layer sends every non-root register into the
/// root register offset-aligned, 6 shared slots per layer. Root is the
/// highest-degree node (ties: lowest index).
BuiltModel build_circuit(const Graph &graph, const ModelSpec &spec);

/// Initial state for a built model (amplitude-encoded registers plus edge
/// qubits when present).
StateVector encode_input(const BuiltModel &model, const Graph &graph);

/// Applies the circuit with bound parameters and returns <Z> on the readout
/// qubit. Deterministic; no sampling.
double forward(const BuiltModel &model, std::span<const double> params,
               const StateVector &input);

/// +1 if the expectation is >= 0, else -1.
int classify(double expectation);

} // namespace qgcn
