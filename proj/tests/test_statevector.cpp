#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qgcn/statevector.hpp"

using namespace qgcn;
using test::random_state;

namespace {

GateInstance rotation(GateKind kind, int qubit, double theta) {
    GateInstance g;
    g.kind = kind;
    g.targets = {qubit};
    g.angle = Angle::lit(theta);
    return g;
}

GateInstance two_qubit(GateKind kind, int a, int b) {
    GateInstance g;
    g.kind = kind;
    g.targets = {a, b};
    return g;
}

GateInstance random_gate(int n_qubits, std::mt19937_64 &rng) {
    std::uniform_int_distribution<int> kind_pick(0, 4);
    std::uniform_int_distribution<int> qubit_pick(0, n_qubits - 1);
    std::uniform_real_distribution<double> angle_pick(-3.2, 3.2);
    const auto kind = static_cast<GateKind>(kind_pick(rng));
    if (kind == GateKind::CNOT || kind == GateKind::SWAP) {
        int a = qubit_pick(rng);
        int b = qubit_pick(rng);
        while (b == a) {
            b = qubit_pick(rng);
        }
        return two_qubit(kind, a, b);
    }
    return rotation(kind, qubit_pick(rng), angle_pick(rng));
}

} // namespace

TEST_CASE("RZ(0) is the identity") {
    std::mt19937_64 rng(7);
    StateVector s = random_state(3, rng);
    const StateVector before = s;
    apply_gate(s, rotation(GateKind::RZ, 1, 0.0));
    for (std::uint64_t i = 0; i < s.size(); ++i) {
        CHECK(std::abs(s[i] - before[i]) < 1e-15);
    }
}

TEST_CASE("RX(pi) on |0> gives -i|1>") {
    StateVector s(1);
    apply_gate(s, rotation(GateKind::RX, 0, M_PI));
    CHECK(std::abs(s[0]) < 1e-12);
    CHECK(std::abs(s[1] - complex(0, -1)) < 1e-12);
}

TEST_CASE("CNOT flips the target when the control is set") {
    // |10>: qubit 1 (control) set, qubit 0 clear.
    StateVector s = StateVector::basis_state(2, 0b10);
    apply_gate(s, two_qubit(GateKind::CNOT, 1, 0));
    CHECK(std::abs(s[0b11] - complex(1, 0)) < 1e-15);

    StateVector idle = StateVector::basis_state(2, 0b00);
    apply_gate(idle, two_qubit(GateKind::CNOT, 1, 0));
    CHECK(std::abs(idle[0b00] - complex(1, 0)) < 1e-15);
}

TEST_CASE("SWAP exchanges |01> and |10>") {
    StateVector s = StateVector::basis_state(2, 0b01);
    apply_gate(s, two_qubit(GateKind::SWAP, 0, 1));
    CHECK(std::abs(s[0b10] - complex(1, 0)) < 1e-15);
}

TEST_CASE("gate application rejects bad input") {
    StateVector s(2);
    CHECK_THROWS_AS(apply_gate(s, rotation(GateKind::RY, 5, 0.3)), Error);
    GateInstance unresolved;
    unresolved.kind = GateKind::RY;
    unresolved.targets = {0};
    unresolved.angle = Angle::bound(0);
    CHECK_THROWS_AS(apply_gate(s, unresolved), Error); // no params supplied
    GateInstance bare;
    bare.kind = GateKind::RY;
    bare.targets = {0};
    CHECK_THROWS_AS(apply_gate(s, bare), Error); // rotation without angle
    GateInstance clash = two_qubit(GateKind::CNOT, 0, 1);
    clash.controls = {1};
    CHECK_THROWS_AS(apply_gate(s, clash), Error);
}

TEST_CASE("expectation_z basics") {
    StateVector zero(1);
    CHECK(expectation_z(zero, 0) == doctest::Approx(1.0));
    StateVector one = StateVector::basis_state(1, 1);
    CHECK(expectation_z(one, 0) == doctest::Approx(-1.0));

    StateVector s(1);
    apply_gate(s, rotation(GateKind::RY, 0, M_PI / 2));
    CHECK(std::abs(expectation_z(s, 0)) < 1e-12);

    CHECK_THROWS_AS(expectation_z(zero, 3), Error);
}

TEST_CASE("expectation_z matches the matrix-element oracle") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 4);
        StateVector s = random_state(n, rng);
        for (int q = 0; q < n; ++q) {
            CHECK(expectation_z(s, q) ==
                  doctest::Approx(test::expectation_z_matrix(s, q)).epsilon(1e-12));
        }
    }
}

TEST_CASE("measure_and_collapse on basis states is deterministic") {
    std::mt19937_64 rng(3);
    auto [o0, s0] = measure_and_collapse(StateVector(1), 0, rng);
    CHECK(o0 == 0);
    CHECK(std::abs(s0[0] - complex(1, 0)) < 1e-15);
    auto [o1, s1] = measure_and_collapse(StateVector::basis_state(1, 1), 0, rng);
    CHECK(o1 == 1);
    CHECK(std::abs(s1[1] - complex(1, 0)) < 1e-15);
}

TEST_CASE("measure_and_collapse follows the Born rule on |+>") {
    StateVector plus(1, {complex(M_SQRT1_2, 0), complex(M_SQRT1_2, 0)});
    std::mt19937_64 rng(12345);
    int ones = 0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        ones += measure_and_collapse(plus, 0, rng).first;
    }
    CHECK(std::abs(ones / static_cast<double>(draws) - 0.5) < 0.01);
}

TEST_CASE("impossible branches are rejected") {
    CHECK_THROWS_AS(project_qubit(StateVector(1), 0, 1), Error);
}

TEST_CASE("tensor_product conventions") {
    StateVector zero(1);
    StateVector one = StateVector::basis_state(1, 1);

    StateVector zz = tensor_product(zero, zero);
    CHECK(std::abs(zz[0] - complex(1, 0)) < 1e-15);

    // First factor occupies the high qubit.
    StateVector oz = tensor_product(one, zero);
    CHECK(std::abs(oz[0b10] - complex(1, 0)) < 1e-15);

    StateVector super(1, {complex(0.6, 0), complex(0.8, 0)});
    StateVector sz = tensor_product(super, zero);
    CHECK(sz[0b00] == complex(0.6, 0));
    CHECK(sz[0b10] == complex(0.8, 0));
    CHECK(std::abs(sz[0b01]) + std::abs(sz[0b11]) == 0.0);
    CHECK(sz.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("norm is conserved across long random gate sequences") {
    std::mt19937_64 rng(42);
    StateVector s = random_state(5, rng);
    for (int i = 0; i < 2000; ++i) {
        apply_gate(s, random_gate(5, rng));
        if (i % 100 == 0) {
            CHECK(std::abs(s.norm() - 1.0) < 1e-10);
        }
    }
    CHECK(std::abs(s.norm() - 1.0) < 1e-10);
}

TEST_CASE("every gate kind passes the unitarity oracle") {
    std::mt19937_64 rng(19);
    for (int n = 2; n <= 4; ++n) {
        for (int trial = 0; trial < 10; ++trial) {
            GateInstance g = random_gate(n, rng);
            const auto u = test::build_unitary(std::span(&g, 1), n);
            CHECK(test::deviation_from_unitarity(u) < 1e-10);
        }
    }
}

TEST_CASE("controlled gates are unitary and act only on the control subspace") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        GateInstance g = rotation(GateKind::RY, 0, 1.3);
        g.controls = {2};
        const auto u = test::build_unitary(std::span(&g, 1), 3);
        CHECK(test::deviation_from_unitarity(u) < 1e-10);

        StateVector s = random_state(2, rng);
        StateVector full = tensor_product(StateVector(1), s); // control qubit 2 is |0>
        apply_gate(full, g);
        const StateVector expect = tensor_product(StateVector(1), s);
        for (std::uint64_t i = 0; i < full.size(); ++i) {
            CHECK(std::abs(full[i] - expect[i]) < 1e-12);
        }
    }
}

TEST_CASE("gate application is linear") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        GateInstance g = random_gate(3, rng);
        StateVector s1 = random_state(3, rng);
        StateVector s2 = random_state(3, rng);
        const complex alpha(0.3, -0.2);
        const complex beta(-0.5, 0.7);

        std::vector<complex> mixed(8);
        for (int i = 0; i < 8; ++i) {
            mixed[i] = alpha * s1[i] + beta * s2[i];
        }
        StateVector sm(3, std::move(mixed)); // intentionally unnormalized

        apply_gate(sm, g);
        apply_gate(s1, g);
        apply_gate(s2, g);
        for (int i = 0; i < 8; ++i) {
            CHECK(std::abs(sm[i] - (alpha * s1[i] + beta * s2[i])) < 1e-12);
        }
    }
}
