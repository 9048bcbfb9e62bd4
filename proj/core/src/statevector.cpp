#include "qgcn/statevector.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace qgcn {

namespace {

constexpr double kImpossibleBranch = 1e-15;

std::uint64_t bit(int qubit) { return std::uint64_t{1} << qubit; }

void check_qubit(const StateVector &state, int qubit, const char *what) {
    if (qubit < 0 || qubit >= state.n_qubits()) {
        throw Error(std::string(what) + ": qubit index " + std::to_string(qubit) +
                    " out of range for " + std::to_string(state.n_qubits()) + " qubits");
    }
}

std::uint64_t control_mask(const StateVector &state, const GateInstance &gate) {
    std::uint64_t mask = 0;
    for (int c : gate.controls) {
        check_qubit(state, c, "control");
        for (int t : gate.targets) {
            if (t == c) {
                throw Error("control qubit " + std::to_string(c) + " collides with target");
            }
        }
        mask |= bit(c);
    }
    return mask;
}

// 2x2 matrix in row-major order applied to `target`, restricted to the
// subspace where every bit of `cmask` is set.
void apply_2x2(StateVector &state, int target, const std::array<complex, 4> &m,
               std::uint64_t cmask) {
    const std::uint64_t tbit = bit(target);
    const std::uint64_t dim = state.size();
    for (std::uint64_t i = 0; i < dim; ++i) {
        if ((i & tbit) != 0 || (i & cmask) != cmask) {
            continue;
        }
        const std::uint64_t j = i | tbit;
        const complex a0 = state[i];
        const complex a1 = state[j];
        state[i] = m[0] * a0 + m[1] * a1;
        state[j] = m[2] * a0 + m[3] * a1;
    }
}

std::array<complex, 4> rotation_matrix(GateKind kind, double theta) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    switch (kind) {
    case GateKind::RX:
        return {complex(c, 0), complex(0, -s), complex(0, -s), complex(c, 0)};
    case GateKind::RY:
        return {complex(c, 0), complex(-s, 0), complex(s, 0), complex(c, 0)};
    case GateKind::RZ:
        return {std::polar(1.0, -theta / 2.0), complex(0, 0), complex(0, 0),
                std::polar(1.0, theta / 2.0)};
    default:
        throw Error("not a rotation gate");
    }
}

} // namespace

const char *gate_kind_name(GateKind kind) {
    switch (kind) {
    case GateKind::RX:
        return "RX";
    case GateKind::RY:
        return "RY";
    case GateKind::RZ:
        return "RZ";
    case GateKind::CNOT:
        return "CNOT";
    case GateKind::SWAP:
        return "SWAP";
    }
    return "?";
}

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 0 || n_qubits > 30) {
        throw Error("unsupported qubit count " + std::to_string(n_qubits));
    }
    amps_.assign(std::uint64_t{1} << n_qubits, complex(0, 0));
    amps_[0] = complex(1, 0);
}

StateVector::StateVector(int n_qubits, std::vector<complex> amplitudes)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
    if (amps_.size() != (std::uint64_t{1} << n_qubits)) {
        throw Error("amplitude count does not match qubit count");
    }
}

StateVector StateVector::basis_state(int n_qubits, std::uint64_t index) {
    StateVector s(n_qubits);
    s.amps_[0] = complex(0, 0);
    s.amps_.at(index) = complex(1, 0);
    return s;
}

double StateVector::norm() const {
    double sum = 0.0;
    for (const complex &a : amps_) {
        sum += std::norm(a);
    }
    return std::sqrt(sum);
}

void apply_gate(StateVector &state, const GateInstance &gate,
                std::span<const double> params) {
    for (int t : gate.targets) {
        check_qubit(state, t, "target");
    }
    const std::uint64_t cmask = control_mask(state, gate);

    if (gate.is_rotation()) {
        if (gate.targets.size() != 1) {
            throw Error("rotation gate takes exactly one target");
        }
        if (!gate.angle) {
            throw Error("rotation gate without an angle");
        }
        const double theta = gate.angle->resolve(params);
        apply_2x2(state, gate.targets[0], rotation_matrix(gate.kind, theta), cmask);
        return;
    }

    if (gate.angle) {
        throw Error(std::string(gate_kind_name(gate.kind)) + " carries no angle");
    }
    if (gate.targets.size() != 2 || gate.targets[0] == gate.targets[1]) {
        throw Error(std::string(gate_kind_name(gate.kind)) + " takes two distinct targets");
    }

    if (gate.kind == GateKind::CNOT) {
        // X on targets[1], controlled on targets[0] plus any extra controls.
        static const std::array<complex, 4> x_matrix = {complex(0, 0), complex(1, 0),
                                                        complex(1, 0), complex(0, 0)};
        apply_2x2(state, gate.targets[1], x_matrix, cmask | bit(gate.targets[0]));
        return;
    }

    // SWAP
    const std::uint64_t abit = bit(gate.targets[0]);
    const std::uint64_t bbit = bit(gate.targets[1]);
    const std::uint64_t dim = state.size();
    for (std::uint64_t i = 0; i < dim; ++i) {
        if ((i & abit) == 0 || (i & bbit) != 0 || (i & cmask) != cmask) {
            continue;
        }
        std::swap(state[i], state[(i ^ abit) | bbit]);
    }
}

void apply_gates(StateVector &state, std::span<const GateInstance> gates,
                 std::span<const double> params) {
    for (const GateInstance &g : gates) {
        apply_gate(state, g, params);
    }
}

void apply_circuit(StateVector &state, const Circuit &circuit,
                   std::span<const double> params) {
    if (state.n_qubits() != circuit.n_qubits) {
        throw Error("state has " + std::to_string(state.n_qubits()) +
                    " qubits, circuit expects " + std::to_string(circuit.n_qubits));
    }
    apply_gates(state, circuit.gates, params);
}

double expectation_z(const StateVector &state, int qubit) {
    check_qubit(state, qubit, "expectation_z");
    const std::uint64_t qbit = bit(qubit);
    double value = 0.0;
    const std::uint64_t dim = state.size();
    for (std::uint64_t i = 0; i < dim; ++i) {
        const double p = std::norm(state[i]);
        value += (i & qbit) ? -p : p;
    }
    return value;
}

std::pair<double, StateVector> project_qubit(const StateVector &state, int qubit,
                                             int outcome) {
    check_qubit(state, qubit, "project_qubit");
    const std::uint64_t qbit = bit(qubit);
    const std::uint64_t dim = state.size();
    double prob = 0.0;
    for (std::uint64_t i = 0; i < dim; ++i) {
        if (((i & qbit) != 0) == (outcome == 1)) {
            prob += std::norm(state[i]);
        }
    }
    if (prob < kImpossibleBranch) {
        throw Error("impossible measurement branch: outcome " + std::to_string(outcome) +
                    " on qubit " + std::to_string(qubit) + " has probability " +
                    std::to_string(prob));
    }
    StateVector collapsed = state;
    const double scale = 1.0 / std::sqrt(prob);
    for (std::uint64_t i = 0; i < dim; ++i) {
        if (((i & qbit) != 0) == (outcome == 1)) {
            collapsed[i] *= scale;
        } else {
            collapsed[i] = complex(0, 0);
        }
    }
    return {prob, std::move(collapsed)};
}

std::pair<int, StateVector> measure_and_collapse(const StateVector &state, int qubit,
                                                 std::mt19937_64 &rng) {
    check_qubit(state, qubit, "measure_and_collapse");
    const std::uint64_t qbit = bit(qubit);
    double p1 = 0.0;
    const std::uint64_t dim = state.size();
    for (std::uint64_t i = 0; i < dim; ++i) {
        if (i & qbit) {
            p1 += std::norm(state[i]);
        }
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int outcome = unit(rng) < p1 ? 1 : 0;
    auto [prob, collapsed] = project_qubit(state, qubit, outcome);
    return {outcome, std::move(collapsed)};
}

StateVector tensor_product(const StateVector &a, const StateVector &b) {
    StateVector out(a.n_qubits() + b.n_qubits());
    out[0] = complex(0, 0);
    const std::uint64_t bdim = b.size();
    for (std::uint64_t ia = 0; ia < a.size(); ++ia) {
        for (std::uint64_t ib = 0; ib < bdim; ++ib) {
            out[ia * bdim + ib] = a[ia] * b[ib];
        }
    }
    return out;
}

void apply_rotation_generator(StateVector &state, const GateInstance &gate) {
    if (!gate.is_rotation() || gate.targets.size() != 1) {
        throw Error("rotation generator requested for non-rotation gate");
    }
    check_qubit(state, gate.targets[0], "target");
    const std::uint64_t cmask = control_mask(state, gate);
    const std::uint64_t tbit = bit(gate.targets[0]);
    const std::uint64_t dim = state.size();
    const complex half_mi(0, -0.5);
    for (std::uint64_t i = 0; i < dim; ++i) {
        if ((i & tbit) != 0) {
            continue;
        }
        const std::uint64_t j = i | tbit;
        if ((i & cmask) != cmask) {
            state[i] = complex(0, 0);
            state[j] = complex(0, 0);
            continue;
        }
        const complex a0 = state[i];
        const complex a1 = state[j];
        switch (gate.kind) {
        case GateKind::RX:
            state[i] = half_mi * a1;
            state[j] = half_mi * a0;
            break;
        case GateKind::RY:
            state[i] = half_mi * complex(0, -1) * a1;
            state[j] = half_mi * complex(0, 1) * a0;
            break;
        case GateKind::RZ:
            state[i] = half_mi * a0;
            state[j] = -half_mi * a1;
            break;
        default:
            break;
        }
    }
}

} // namespace qgcn
