// Shared model-level oracles: explicit measurement-branch pooling and random
// graph/model generation. Test-only.
#pragma once

#include <random>
#include <vector>

#include "qgcn/gates.hpp"
#include "qgcn/model.hpp"

namespace qgcn::test {

/// Random connected-enough graph: 2..max_nodes nodes, positive random
/// features of `feature_dim`, at least one edge.
inline Graph random_graph(std::mt19937_64 &rng, int max_nodes = 4, int feature_dim = 4) {
    std::uniform_int_distribution<int> node_pick(2, max_nodes);
    std::uniform_real_distribution<double> feat(0.05, 1.0);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    Graph g;
    const int n = node_pick(rng);
    for (int i = 0; i < n; ++i) {
        std::vector<double> f(feature_dim);
        for (double &v : f) {
            v = feat(rng);
        }
        g.node_features.push_back(std::move(f));
        g.node_ids.push_back(i);
    }
    while (g.edges.empty()) {
        for (int u = 0; u < n; ++u) {
            for (int v = u + 1; v < n; ++v) {
                if (coin(rng) < 0.5) {
                    g.edges.insert({u, v});
                }
            }
        }
    }
    return g;
}

/// Expectation through explicit mid-circuit measurement: runs the conv
/// prefix, then for every pool unit rotates the source, enumerates both
/// measurement outcomes with project_qubit, and applies T^dag X T on the
/// target only in the outcome-1 branches. Returns the probability-weighted
/// average of <Z> on the readout qubit. Valid for models with one pool
/// layer (sources are never touched again afterwards).
inline double branch_averaged_expectation(const BuiltModel &model,
                                          std::span<const double> params,
                                          const StateVector &input) {
    const auto &gates = model.circuit.gates;
    const int n_nodes = static_cast<int>(model.plan.node_registers.size());
    const int width = model.plan.register_width();
    const std::size_t pool_gate_count =
        static_cast<std::size_t>(n_nodes - 1) * width * 10;
    const std::size_t conv_gate_count = gates.size() - pool_gate_count;

    StateVector after_conv = input;
    apply_gates(after_conv,
                std::span<const GateInstance>(gates.data(), conv_gate_count), params);

    std::vector<std::pair<double, StateVector>> branches;
    branches.emplace_back(1.0, std::move(after_conv));

    for (std::size_t unit = conv_gate_count; unit < gates.size(); unit += 10) {
        const std::span<const GateInstance> chunk(gates.data() + unit, 10);
        const int q_src = chunk[6].targets[0]; // the unit's CNOT control
        const int q_tgt = chunk[6].targets[1];

        std::vector<std::pair<double, StateVector>> next;
        for (auto &[prob, state] : branches) {
            apply_gates(state, chunk.subspan(0, 3), params); // source rotation
            for (int outcome = 0; outcome < 2; ++outcome) {
                double p_branch;
                StateVector collapsed(1);
                try {
                    std::tie(p_branch, collapsed) = project_qubit(state, q_src, outcome);
                } catch (const Error &) {
                    continue; // zero-probability branch
                }
                if (outcome == 1) {
                    apply_gates(collapsed, chunk.subspan(3, 3), params); // T
                    GateInstance x;
                    x.kind = GateKind::RX;
                    x.targets = {q_tgt};
                    x.angle = Angle::lit(3.141592653589793); // Rx(pi) = -iX
                    apply_gate(collapsed, x);
                    apply_gates(collapsed, chunk.subspan(7, 3), params); // T adjoint
                }
                next.emplace_back(prob * p_branch, std::move(collapsed));
            }
        }
        branches = std::move(next);
    }

    double expectation = 0.0;
    for (const auto &[prob, state] : branches) {
        expectation += prob * expectation_z(state, model.readout_qubit);
    }
    return expectation;
}

} // namespace qgcn::test
