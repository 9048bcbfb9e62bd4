// Microbenchmarks for the statevector kernels and the model hot paths.
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "qgcn/gates.hpp"
#include "qgcn/model.hpp"
#include "qgcn/training.hpp"

using namespace qgcn;

namespace {

StateVector random_state(int n_qubits, std::mt19937_64 &rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<complex> amps(std::uint64_t{1} << n_qubits);
    double norm_sq = 0.0;
    for (auto &a : amps) {
        a = complex(gauss(rng), gauss(rng));
        norm_sq += std::norm(a);
    }
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (auto &a : amps) {
        a *= inv;
    }
    return StateVector(n_qubits, std::move(amps));
}

/// The three-node experiment model with 16-dim features.
std::pair<BuiltModel, Graph> experiment_model(CircuitMode mode) {
    Graph g;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> feat(0.05, 1.0);
    for (int i = 0; i < 3; ++i) {
        std::vector<double> f(16);
        for (double &v : f) {
            v = feat(rng);
        }
        g.node_features.push_back(std::move(f));
        g.node_ids.push_back(i);
    }
    g.edges = {{0, 2}, {1, 2}};
    ModelSpec spec;
    spec.mode = mode;
    return {build_circuit(g, spec), g};
}

void bench_single_qubit_rotation(benchmark::State &state) {
    const int n_qubits = static_cast<int>(state.range(0));
    std::mt19937_64 rng(2);
    StateVector psi = random_state(n_qubits, rng);
    GateInstance gate;
    gate.kind = GateKind::RY;
    gate.targets = {n_qubits / 2};
    gate.angle = Angle::lit(0.37);
    for (auto _ : state) {
        apply_gate(psi, gate);
        benchmark::DoNotOptimize(psi[0]);
    }
    state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << n_qubits));
}

void bench_cnot(benchmark::State &state) {
    const int n_qubits = static_cast<int>(state.range(0));
    std::mt19937_64 rng(3);
    StateVector psi = random_state(n_qubits, rng);
    GateInstance gate;
    gate.kind = GateKind::CNOT;
    gate.targets = {0, n_qubits - 1};
    for (auto _ : state) {
        apply_gate(psi, gate);
        benchmark::DoNotOptimize(psi[0]);
    }
    state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << n_qubits));
}

void bench_controlled_conv_unit(benchmark::State &state) {
    const int n_qubits = static_cast<int>(state.range(0));
    std::mt19937_64 rng(4);
    StateVector psi = random_state(n_qubits, rng);
    ConvUnitParams params;
    std::uniform_real_distribution<double> dist(-3.14, 3.14);
    for (double &t : params.theta) {
        t = dist(rng);
    }
    const auto gates = conv_unit(params, 0, 1, {n_qubits - 1});
    for (auto _ : state) {
        apply_gates(psi, gates);
        benchmark::DoNotOptimize(psi[0]);
    }
}

void bench_forward(benchmark::State &state) {
    const auto mode =
        state.range(0) == 0 ? CircuitMode::Compiled : CircuitMode::EdgeRegister;
    const auto [model, graph] = experiment_model(mode);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dist(-3.14, 3.14);
    std::vector<double> params(static_cast<std::size_t>(model.n_params));
    for (double &v : params) {
        v = dist(rng);
    }
    const StateVector input = encode_input(model, graph);
    for (auto _ : state) {
        benchmark::DoNotOptimize(forward(model, params, input));
    }
}

void bench_gradient(benchmark::State &state) {
    const auto mode = static_cast<GradientMode>(state.range(0));
    const auto [model, graph] = experiment_model(CircuitMode::Compiled);
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> dist(-3.14, 3.14);
    std::vector<double> params(static_cast<std::size_t>(model.n_params));
    for (double &v : params) {
        v = dist(rng);
    }
    const StateVector input = encode_input(model, graph);
    for (auto _ : state) {
        switch (mode) {
        case GradientMode::ParameterShift:
            benchmark::DoNotOptimize(grad_expectation_shift(
                model.circuit, model.readout_qubit, params, input));
            break;
        case GradientMode::Adjoint:
            benchmark::DoNotOptimize(grad_expectation_adjoint(
                model.circuit, model.readout_qubit, params, input));
            break;
        case GradientMode::FiniteDiff:
            benchmark::DoNotOptimize(grad_expectation_fd(
                model.circuit, model.readout_qubit, params, input));
            break;
        }
    }
}

} // namespace

BENCHMARK(bench_single_qubit_rotation)->DenseRange(8, 20, 4);
BENCHMARK(bench_cnot)->DenseRange(8, 20, 4);
BENCHMARK(bench_controlled_conv_unit)->Arg(8)->Arg(12)->Arg(16);
BENCHMARK(bench_forward)->Arg(0)->Arg(1)->ArgNames({"mode"});
BENCHMARK(bench_gradient)
    ->Arg(static_cast<int>(GradientMode::ParameterShift))
    ->Arg(static_cast<int>(GradientMode::Adjoint))
    ->Arg(static_cast<int>(GradientMode::FiniteDiff))
    ->ArgNames({"grad"});

BENCHMARK_MAIN();
