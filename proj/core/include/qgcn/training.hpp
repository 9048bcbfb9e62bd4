#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qgcn/model.hpp"
#include "qgcn/statevector.hpp"

namespace qgcn {

class DivergenceError : public Error {
  public:
    using Error::Error;
};

enum class GradientMode { ParameterShift, Adjoint, FiniteDiff };
enum class OptimizerKind { Sgd, Adam };

GradientMode parse_gradient_mode(const std::string &name);
const char *gradient_mode_name(GradientMode mode);
OptimizerKind parse_optimizer(const std::string &name);
const char *optimizer_name(OptimizerKind kind);

struct TrainConfig {
    int iterations = 1000;
    int batch_size = 16;
    double learning_rate = 0.01;
    OptimizerKind optimizer = OptimizerKind::Adam;
    std::uint64_t seed = 0;
    GradientMode gradient_mode = GradientMode::Adjoint;
    int eval_interval = 10;
    int workers = 1;

    void validate() const;
};

struct MetricsRecord {
    int iteration = 0;
    double train_loss = 0.0;
    double train_accuracy = 0.0;
    double test_accuracy = 0.0;
    double wall_time = 0.0;
};

/// Mean of (prediction - label)^2 over the batch.
double squared_loss(std::span<const double> predictions, std::span<const int> labels);

/// d<Z>/dtheta for every parameter slot, via two shifted evaluations per
/// rotation occurrence (the +-pi/2 shift rule), summed over occurrences that
/// share a slot.
std::vector<double> grad_expectation_shift(const Circuit &circuit, int readout_qubit,
                                           std::span<const double> params,
                                           const StateVector &input);

/// Same gradient in one forward plus one backward amplitude sweep.
std::vector<double> grad_expectation_adjoint(const Circuit &circuit, int readout_qubit,
                                             std::span<const double> params,
                                             const StateVector &input);

/// Central finite differences on the expectation, step `h`.
std::vector<double> grad_expectation_fd(const Circuit &circuit, int readout_qubit,
                                        std::span<const double> params,
                                        const StateVector &input, double h = 1e-4);

/// Gradient of the mean squared loss over a batch, per-sample evaluations
/// fanned out over `workers` threads. Returns (loss, gradient).
std::pair<double, std::vector<double>> loss_and_gradient(
    const BuiltModel &model, std::span<const double> params,
    std::span<const StateVector> inputs, std::span<const int> labels, GradientMode mode,
    int workers = 1);

/// Batched forward passes.
std::vector<double> predict(const BuiltModel &model, std::span<const double> params,
                            std::span<const StateVector> inputs, int workers = 1);

double accuracy(std::span<const double> predictions, std::span<const int> labels);

struct TrainResult {
    ParamTable params;
    std::vector<MetricsRecord> metrics;
};

/// Seeded mini-batch training: uniform(-0.1, 0.1) init, shuffle each epoch
/// without replacement, one optimizer step per iteration. Fully reproducible
/// for a fixed config (wall_time aside).
TrainResult train(const BuiltModel &model, std::span<const StateVector> train_inputs,
                  std::span<const int> train_labels,
                  std::span<const StateVector> test_inputs,
                  std::span<const int> test_labels, const TrainConfig &config);

} // namespace qgcn
