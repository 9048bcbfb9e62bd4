#include "qgcn/gates.hpp"

#include <algorithm>

namespace qgcn {

namespace {

GateInstance rot(GateKind kind, int qubit, Angle angle, const std::vector<int> &controls) {
    GateInstance g;
    g.kind = kind;
    g.targets = {qubit};
    g.controls = controls;
    g.angle = angle;
    return g;
}

GateInstance cnot(int control, int target, const std::vector<int> &controls) {
    GateInstance g;
    g.kind = GateKind::CNOT;
    g.targets = {control, target};
    g.controls = controls;
    return g;
}

void check_distinct(int a, int b, const std::vector<int> &controls) {
    if (a == b) {
        throw Error("two-qubit block needs distinct qubits");
    }
    for (int c : controls) {
        if (c == a || c == b) {
            throw Error("control qubit " + std::to_string(c) + " collides with block target");
        }
    }
}

template <std::size_t N>
std::array<Angle, N> literal_angles(const std::array<double, N> &theta) {
    std::array<Angle, N> out;
    for (std::size_t i = 0; i < N; ++i) {
        out[i] = Angle::lit(theta[i]);
    }
    return out;
}

} // namespace

std::vector<GateInstance> single_qubit_universal(Angle alpha, Angle beta, Angle gamma,
                                                 int qubit) {
    return {rot(GateKind::RZ, qubit, gamma, {}), rot(GateKind::RY, qubit, beta, {}),
            rot(GateKind::RZ, qubit, alpha, {})};
}

std::vector<GateInstance> conv_unit(std::span<const Angle, kConvUnitParams> t, int q_a,
                                    int q_b, std::vector<int> controls) {
    check_distinct(q_a, q_b, controls);
    std::vector<GateInstance> gates;
    gates.reserve(18);
    // Universal blocks a on q_a and b on q_b.
    gates.push_back(rot(GateKind::RZ, q_a, t[2], controls));
    gates.push_back(rot(GateKind::RY, q_a, t[1], controls));
    gates.push_back(rot(GateKind::RZ, q_a, t[0], controls));
    gates.push_back(rot(GateKind::RZ, q_b, t[5], controls));
    gates.push_back(rot(GateKind::RY, q_b, t[4], controls));
    gates.push_back(rot(GateKind::RZ, q_b, t[3], controls));
    // Entangling core: 3 CNOTs interleaved with Rz/Ry.
    gates.push_back(cnot(q_b, q_a, controls));
    gates.push_back(rot(GateKind::RZ, q_a, t[6], controls));
    gates.push_back(rot(GateKind::RY, q_b, t[7], controls));
    gates.push_back(cnot(q_a, q_b, controls));
    gates.push_back(rot(GateKind::RY, q_b, t[8], controls));
    gates.push_back(cnot(q_b, q_a, controls));
    // Universal blocks c on q_a and d on q_b.
    gates.push_back(rot(GateKind::RZ, q_a, t[11], controls));
    gates.push_back(rot(GateKind::RY, q_a, t[10], controls));
    gates.push_back(rot(GateKind::RZ, q_a, t[9], controls));
    gates.push_back(rot(GateKind::RZ, q_b, t[14], controls));
    gates.push_back(rot(GateKind::RY, q_b, t[13], controls));
    gates.push_back(rot(GateKind::RZ, q_b, t[12], controls));
    return gates;
}

std::vector<GateInstance> conv_unit(const ConvUnitParams &params, int q_a, int q_b,
                                    std::vector<int> controls) {
    auto angles = literal_angles(params.theta);
    return conv_unit(std::span<const Angle, kConvUnitParams>(angles), q_a, q_b,
                     std::move(controls));
}

std::vector<GateInstance> pool_unit(std::span<const Angle, kPoolUnitParams> t, int q_src,
                                    int q_tgt) {
    check_distinct(q_src, q_tgt, {});
    std::vector<GateInstance> gates;
    gates.reserve(10);
    gates.push_back(rot(GateKind::RZ, q_src, t[0], {}));
    gates.push_back(rot(GateKind::RY, q_src, t[1], {}));
    gates.push_back(rot(GateKind::RZ, q_src, t[2], {}));
    // Target block T.
    gates.push_back(rot(GateKind::RZ, q_tgt, t[3], {}));
    gates.push_back(rot(GateKind::RY, q_tgt, t[4], {}));
    gates.push_back(rot(GateKind::RZ, q_tgt, t[5], {}));
    gates.push_back(cnot(q_src, q_tgt, {}));
    // T adjoint; cancels when the source is |0>.
    gates.push_back(rot(GateKind::RZ, q_tgt, -t[5], {}));
    gates.push_back(rot(GateKind::RY, q_tgt, -t[4], {}));
    gates.push_back(rot(GateKind::RZ, q_tgt, -t[3], {}));
    return gates;
}

std::vector<GateInstance> pool_unit(const PoolUnitParams &params, int q_src, int q_tgt) {
    auto angles = literal_angles(params.theta);
    return pool_unit(std::span<const Angle, kPoolUnitParams>(angles), q_src, q_tgt);
}

std::vector<GateInstance> adjoint(std::span<const GateInstance> gates) {
    std::vector<GateInstance> out(gates.rbegin(), gates.rend());
    for (GateInstance &g : out) {
        if (g.angle) {
            g.angle = -*g.angle;
        }
    }
    return out;
}

} // namespace qgcn
