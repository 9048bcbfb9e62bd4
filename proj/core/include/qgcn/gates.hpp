#pragma once

#include <array>
#include <span>
#include <vector>

#include "qgcn/statevector.hpp"

namespace qgcn {

constexpr int kConvUnitParams = 15;
constexpr int kPoolUnitParams = 6;

struct ConvUnitParams {
    std::array<double, kConvUnitParams> theta{};
};

struct PoolUnitParams {
    std::array<double, kPoolUnitParams> theta{};
};

/// Universal single-qubit rotation Rz(alpha) Ry(beta) Rz(gamma), emitted
/// rightmost factor first. Realizes any SU(2) element up to global phase.
std::vector<GateInstance> single_qubit_universal(Angle alpha, Angle beta, Angle gamma,
                                                 int qubit);

/// 15-parameter two-qubit convolution block: universal rotations on both
/// qubits, a 3-CNOT entangling core with Rz/Ry rotations, then universal
/// rotations again. 18 gates total. With `controls` set, every emitted gate
/// is additionally controlled (edge-register mode).
std::vector<GateInstance> conv_unit(std::span<const Angle, kConvUnitParams> theta,
                                    int q_a, int q_b, std::vector<int> controls = {});
std::vector<GateInstance> conv_unit(const ConvUnitParams &params, int q_a, int q_b,
                                    std::vector<int> controls = {});

/// 6-parameter pooling block: rotation block on the source, rotation block T
/// on the target, CNOT(src -> tgt), then T's adjoint on the target. When the
/// source is |0> the target blocks cancel; when |1> the target receives
/// T^dag X T. Deferred-measurement form of "measure, then conditionally
/// apply V".
std::vector<GateInstance> pool_unit(std::span<const Angle, kPoolUnitParams> theta,
                                    int q_src, int q_tgt);
std::vector<GateInstance> pool_unit(const PoolUnitParams &params, int q_src, int q_tgt);

/// Adjoint of a gate sequence: reversed order, negated angles (CNOT and SWAP
/// are self-inverse).
std::vector<GateInstance> adjoint(std::span<const GateInstance> gates);

} // namespace qgcn
