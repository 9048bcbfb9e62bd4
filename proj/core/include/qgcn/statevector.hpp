#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qgcn {

using complex = std::complex<double>;

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class GateKind { RX, RY, RZ, CNOT, SWAP };

const char *gate_kind_name(GateKind kind);

/// Rotation angle: either a literal value in radians, or a reference to a
/// parameter slot scaled by `value` (so shared slots can appear negated).
struct Angle {
    std::optional<int> slot;
    double value = 0.0;

    static Angle lit(double radians) { return Angle{std::nullopt, radians}; }
    static Angle bound(int slot, double scale = 1.0) { return Angle{slot, scale}; }

    Angle operator-() const { return Angle{slot, -value}; }

    double resolve(std::span<const double> params) const {
        if (!slot) {
            return value;
        }
        if (*slot < 0 || static_cast<std::size_t>(*slot) >= params.size()) {
            throw Error("unresolved symbolic angle: slot " + std::to_string(*slot) +
                        " not covered by " + std::to_string(params.size()) + " parameters");
        }
        return value * params[static_cast<std::size_t>(*slot)];
    }
};

/// One gate in a circuit. Rotations carry exactly one angle; CNOT and SWAP
/// carry none. `targets` holds (control, target) for CNOT and the swapped
/// pair for SWAP. `controls` are extra control qubits: the gate acts only on
/// the subspace where every control is |1>.
struct GateInstance {
    GateKind kind;
    std::vector<int> targets;
    std::vector<int> controls;
    std::optional<Angle> angle;

    bool is_rotation() const {
        return kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ;
    }
};

struct Circuit {
    int n_qubits = 0;
    std::vector<GateInstance> gates;
};

/// Dense n-qubit pure state. Qubit 0 is the least significant bit of the
/// basis index.
class StateVector {
  public:
    explicit StateVector(int n_qubits);
    StateVector(int n_qubits, std::vector<complex> amplitudes);

    static StateVector basis_state(int n_qubits, std::uint64_t index);

    int n_qubits() const { return n_qubits_; }
    std::uint64_t size() const { return std::uint64_t{1} << n_qubits_; }

    complex &operator[](std::uint64_t i) { return amps_[i]; }
    const complex &operator[](std::uint64_t i) const { return amps_[i]; }

    std::span<complex> amplitudes() { return amps_; }
    std::span<const complex> amplitudes() const { return amps_; }

    double norm() const;

  private:
    int n_qubits_;
    std::vector<complex> amps_;
};

/// Applies the gate in place. Symbolic angles are resolved against `params`;
/// literal angles ignore it.
void apply_gate(StateVector &state, const GateInstance &gate,
                std::span<const double> params = {});

void apply_circuit(StateVector &state, const Circuit &circuit,
                   std::span<const double> params = {});
void apply_gates(StateVector &state, std::span<const GateInstance> gates,
                 std::span<const double> params = {});

/// p(qubit = 0) - p(qubit = 1), computed exactly from the amplitudes.
double expectation_z(const StateVector &state, int qubit);

/// Projects onto the given measurement outcome and renormalizes. Returns the
/// outcome probability together with the collapsed state. Throws on a branch
/// whose probability is below 1e-15.
std::pair<double, StateVector> project_qubit(const StateVector &state, int qubit,
                                             int outcome);

std::pair<int, StateVector> measure_and_collapse(const StateVector &state, int qubit,
                                                 std::mt19937_64 &rng);

/// Kronecker product; `a` occupies the high qubits of the result, so
/// |1> (x) |0> is the index-2 basis state of a 2-qubit register.
StateVector tensor_product(const StateVector &a, const StateVector &b);

/// Maps state -> (-i/2) P |state> on the control-active subspace and zero
/// elsewhere, where P is the Pauli generating the gate's rotation. Used by
/// adjoint differentiation; throws for non-rotation gates.
void apply_rotation_generator(StateVector &state, const GateInstance &gate);

} // namespace qgcn
