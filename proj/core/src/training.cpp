#include "qgcn/training.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <thread>

namespace qgcn {

namespace {

constexpr double kDivergenceLimit = 1e3;
constexpr double kHalfPi = 1.5707963267948966;

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)> &fn) {
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    const int n_threads = std::min<std::size_t>(workers, n);
    std::vector<std::thread> threads;
    threads.reserve(n_threads);
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n_threads);
    for (int t = 0; t < n_threads; ++t) {
        threads.emplace_back([&, t] {
            try {
                for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                    fn(i);
                }
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto &th : threads) {
        th.join();
    }
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

double eval_with_literal_angle(const Circuit &circuit, int readout_qubit,
                               std::span<const double> params, const StateVector &input,
                               std::size_t gate_index, double angle) {
    StateVector state = input;
    for (std::size_t g = 0; g < circuit.gates.size(); ++g) {
        if (g == gate_index) {
            GateInstance shifted = circuit.gates[g];
            shifted.angle = Angle::lit(angle);
            apply_gate(state, shifted, params);
        } else {
            apply_gate(state, circuit.gates[g], params);
        }
    }
    return expectation_z(state, readout_qubit);
}

void apply_gate_adjoint(StateVector &state, const GateInstance &gate,
                        std::span<const double> params) {
    if (gate.is_rotation()) {
        GateInstance inv = gate;
        inv.angle = Angle::lit(-gate.angle->resolve(params));
        apply_gate(state, inv);
    } else {
        apply_gate(state, gate, params); // CNOT and SWAP are self-inverse
    }
}

complex inner_product(const StateVector &a, const StateVector &b) {
    complex sum(0, 0);
    for (std::uint64_t i = 0; i < a.size(); ++i) {
        sum += std::conj(a[i]) * b[i];
    }
    return sum;
}

int count_rotation_slots(const Circuit &circuit, std::span<const double> params) {
    int max_slot = -1;
    for (const GateInstance &g : circuit.gates) {
        if (g.angle && g.angle->slot) {
            if (!g.is_rotation()) {
                throw Error("parametrized non-rotation gate has no shift rule");
            }
            max_slot = std::max(max_slot, *g.angle->slot);
        }
    }
    if (max_slot >= static_cast<int>(params.size())) {
        throw Error("circuit binds slot " + std::to_string(max_slot) + " but only " +
                    std::to_string(params.size()) + " parameters given");
    }
    return static_cast<int>(params.size());
}

} // namespace

GradientMode parse_gradient_mode(const std::string &name) {
    if (name == "shift") {
        return GradientMode::ParameterShift;
    }
    if (name == "adjoint") {
        return GradientMode::Adjoint;
    }
    if (name == "fd") {
        return GradientMode::FiniteDiff;
    }
    throw Error("unknown gradient mode '" + name + "'");
}

const char *gradient_mode_name(GradientMode mode) {
    switch (mode) {
    case GradientMode::ParameterShift:
        return "shift";
    case GradientMode::Adjoint:
        return "adjoint";
    case GradientMode::FiniteDiff:
        return "fd";
    }
    return "?";
}

OptimizerKind parse_optimizer(const std::string &name) {
    if (name == "sgd") {
        return OptimizerKind::Sgd;
    }
    if (name == "adam") {
        return OptimizerKind::Adam;
    }
    throw Error("unknown optimizer '" + name + "'");
}

const char *optimizer_name(OptimizerKind kind) {
    return kind == OptimizerKind::Sgd ? "sgd" : "adam";
}

void TrainConfig::validate() const {
    if (iterations < 0) {
        throw Error("iterations must be >= 0");
    }
    if (batch_size < 1) {
        throw Error("batch_size must be >= 1");
    }
    if (learning_rate <= 0.0) {
        throw Error("learning_rate must be positive");
    }
    if (eval_interval < 1) {
        throw Error("eval_interval must be >= 1");
    }
}

double squared_loss(std::span<const double> predictions, std::span<const int> labels) {
    if (predictions.size() != labels.size()) {
        throw Error("predictions and labels differ in length");
    }
    if (predictions.empty()) {
        throw Error("empty batch");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double d = predictions[i] - labels[i];
        sum += d * d;
    }
    return sum / static_cast<double>(predictions.size());
}

std::vector<double> grad_expectation_shift(const Circuit &circuit, int readout_qubit,
                                           std::span<const double> params,
                                           const StateVector &input) {
    std::vector<double> grad(count_rotation_slots(circuit, params), 0.0);
    for (std::size_t g = 0; g < circuit.gates.size(); ++g) {
        const GateInstance &gate = circuit.gates[g];
        if (!gate.angle || !gate.angle->slot) {
            continue;
        }
        const double theta = gate.angle->resolve(params);
        const double plus =
            eval_with_literal_angle(circuit, readout_qubit, params, input, g, theta + kHalfPi);
        const double minus =
            eval_with_literal_angle(circuit, readout_qubit, params, input, g, theta - kHalfPi);
        grad[*gate.angle->slot] += gate.angle->value * 0.5 * (plus - minus);
    }
    return grad;
}

std::vector<double> grad_expectation_adjoint(const Circuit &circuit, int readout_qubit,
                                             std::span<const double> params,
                                             const StateVector &input) {
    std::vector<double> grad(count_rotation_slots(circuit, params), 0.0);

    StateVector ket = input;
    apply_circuit(ket, circuit, params);

    // bra = Z |psi>, then both vectors are walked backwards through the circuit.
    StateVector bra = ket;
    const std::uint64_t rbit = std::uint64_t{1} << readout_qubit;
    for (std::uint64_t i = 0; i < bra.size(); ++i) {
        if (i & rbit) {
            bra[i] = -bra[i];
        }
    }

    for (auto it = circuit.gates.rbegin(); it != circuit.gates.rend(); ++it) {
        const GateInstance &gate = *it;
        apply_gate_adjoint(ket, gate, params);
        if (gate.angle && gate.angle->slot) {
            StateVector tmp = ket;
            apply_gate(tmp, gate, params);
            apply_rotation_generator(tmp, gate);
            grad[*gate.angle->slot] += gate.angle->value * 2.0 * inner_product(bra, tmp).real();
        }
        apply_gate_adjoint(bra, gate, params);
    }
    return grad;
}

std::vector<double> grad_expectation_fd(const Circuit &circuit, int readout_qubit,
                                        std::span<const double> params,
                                        const StateVector &input, double h) {
    const int n = count_rotation_slots(circuit, params);
    std::vector<double> shifted(params.begin(), params.end());
    std::vector<double> grad(n, 0.0);
    for (int p = 0; p < n; ++p) {
        const double saved = shifted[p];
        shifted[p] = saved + h;
        StateVector plus = input;
        apply_circuit(plus, circuit, shifted);
        shifted[p] = saved - h;
        StateVector minus = input;
        apply_circuit(minus, circuit, shifted);
        shifted[p] = saved;
        grad[p] =
            (expectation_z(plus, readout_qubit) - expectation_z(minus, readout_qubit)) /
            (2.0 * h);
    }
    return grad;
}

std::pair<double, std::vector<double>> loss_and_gradient(
    const BuiltModel &model, std::span<const double> params,
    std::span<const StateVector> inputs, std::span<const int> labels, GradientMode mode,
    int workers) {
    if (inputs.empty()) {
        throw Error("empty batch");
    }
    if (inputs.size() != labels.size()) {
        throw Error("inputs and labels differ in length");
    }

    const std::size_t n = inputs.size();
    std::vector<double> preds(n, 0.0);
    std::vector<std::vector<double>> sample_grads(n);

    parallel_for(n, workers, [&](std::size_t i) {
        preds[i] = forward(model, params, inputs[i]);
        switch (mode) {
        case GradientMode::ParameterShift:
            sample_grads[i] =
                grad_expectation_shift(model.circuit, model.readout_qubit, params, inputs[i]);
            break;
        case GradientMode::Adjoint:
            sample_grads[i] = grad_expectation_adjoint(model.circuit, model.readout_qubit,
                                                       params, inputs[i]);
            break;
        case GradientMode::FiniteDiff:
            sample_grads[i] =
                grad_expectation_fd(model.circuit, model.readout_qubit, params, inputs[i]);
            break;
        }
    });

    // Serial reduction in sample order keeps the result independent of
    // thread scheduling.
    std::vector<double> grad(params.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double chain = 2.0 * (preds[i] - labels[i]) / static_cast<double>(n);
        for (std::size_t p = 0; p < grad.size(); ++p) {
            grad[p] += chain * sample_grads[i][p];
        }
    }
    return {squared_loss(preds, labels), std::move(grad)};
}

std::vector<double> predict(const BuiltModel &model, std::span<const double> params,
                            std::span<const StateVector> inputs, int workers) {
    std::vector<double> preds(inputs.size(), 0.0);
    parallel_for(inputs.size(), workers,
                 [&](std::size_t i) { preds[i] = forward(model, params, inputs[i]); });
    return preds;
}

double accuracy(std::span<const double> predictions, std::span<const int> labels) {
    if (predictions.empty()) {
        throw Error("empty evaluation set");
    }
    std::size_t hits = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        hits += classify(predictions[i]) == labels[i] ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(predictions.size());
}

TrainResult train(const BuiltModel &model, std::span<const StateVector> train_inputs,
                  std::span<const int> train_labels,
                  std::span<const StateVector> test_inputs,
                  std::span<const int> test_labels, const TrainConfig &config) {
    config.validate();
    if (train_inputs.empty()) {
        throw Error("empty training set");
    }
    for (int label : train_labels) {
        if (label != 1 && label != -1) {
            throw Error("labels must be +1 or -1");
        }
    }

    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> init(-0.1, 0.1);
    TrainResult result;
    result.params.values.resize(model.n_params);
    for (double &v : result.params.values) {
        v = init(rng);
    }
    std::vector<double> &theta = result.params.values;

    const auto t0 = std::chrono::steady_clock::now();
    const auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    double train_acc = 0.0;
    double test_acc = 0.0;
    const auto full_eval = [&](int iteration, double loss_override, bool has_loss) {
        const auto train_preds = predict(model, theta, train_inputs, config.workers);
        train_acc = accuracy(train_preds, train_labels);
        if (!test_inputs.empty()) {
            const auto test_preds = predict(model, theta, test_inputs, config.workers);
            test_acc = accuracy(test_preds, test_labels);
        }
        const double loss =
            has_loss ? loss_override : squared_loss(train_preds, train_labels);
        result.metrics.push_back({iteration, loss, train_acc, test_acc, elapsed()});
    };

    full_eval(0, 0.0, false);

    // Shuffle-each-epoch batching without replacement.
    std::vector<std::size_t> order(train_inputs.size());
    std::iota(order.begin(), order.end(), 0);
    std::size_t cursor = order.size();

    std::vector<double> adam_m(theta.size(), 0.0);
    std::vector<double> adam_v(theta.size(), 0.0);
    constexpr double beta1 = 0.9;
    constexpr double beta2 = 0.999;
    constexpr double adam_eps = 1e-8;

    std::vector<StateVector> batch_inputs;
    std::vector<int> batch_labels;

    for (int step = 1; step <= config.iterations; ++step) {
        batch_inputs.clear();
        batch_labels.clear();
        for (int b = 0; b < config.batch_size; ++b) {
            if (cursor == order.size()) {
                std::shuffle(order.begin(), order.end(), rng);
                cursor = 0;
            }
            const std::size_t idx = order[cursor++];
            batch_inputs.push_back(train_inputs[idx]);
            batch_labels.push_back(train_labels[idx]);
        }

        auto [loss, grad] = loss_and_gradient(model, theta, batch_inputs, batch_labels,
                                              config.gradient_mode, config.workers);
        if (!std::isfinite(loss) || loss > kDivergenceLimit) {
            throw DivergenceError("training diverged at iteration " + std::to_string(step) +
                                  ": loss " + std::to_string(loss));
        }

        if (config.optimizer == OptimizerKind::Adam) {
            const double bc1 = 1.0 - std::pow(beta1, step);
            const double bc2 = 1.0 - std::pow(beta2, step);
            for (std::size_t p = 0; p < theta.size(); ++p) {
                adam_m[p] = beta1 * adam_m[p] + (1.0 - beta1) * grad[p];
                adam_v[p] = beta2 * adam_v[p] + (1.0 - beta2) * grad[p] * grad[p];
                theta[p] -= config.learning_rate * (adam_m[p] / bc1) /
                            (std::sqrt(adam_v[p] / bc2) + adam_eps);
            }
        } else {
            for (std::size_t p = 0; p < theta.size(); ++p) {
                theta[p] -= config.learning_rate * grad[p];
            }
        }

        if (step % config.eval_interval == 0 || step == config.iterations) {
            full_eval(step, loss, true);
        } else {
            result.metrics.push_back({step, loss, train_acc, test_acc, elapsed()});
        }
    }
    return result;
}

} // namespace qgcn
