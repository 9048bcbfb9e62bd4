#pragma once

#include <string>
#include <vector>

#include "qgcn/dataset.hpp"
#include "qgcn/training.hpp"

namespace qgcn {

constexpr std::uint32_t kDatasetFormatVersion = 1;
constexpr int kParamsFormatVersion = 1;

/// Versioned binary dataset artifact: header (magic, version, seed, node
/// selection, counts, graph shape) followed by the flattened samples of the
/// train and test splits. Little-endian fixed layout.
void save_dataset_artifact(const std::string &path, const SampleSet &train,
                           const SampleSet &test);
std::pair<SampleSet, SampleSet> load_dataset_artifact(const std::string &path);

std::string dataset_summary(const SampleSet &train, const SampleSet &test);

struct ParamsFile {
    int format_version = kParamsFormatVersion;
    int n_conv = 1;
    int n_pool = 1;
    CircuitMode mode = CircuitMode::Compiled;
    std::array<int, 3> node_selection{0, 2, 3};
    std::vector<double> values;
};

void save_params(const std::string &path, const ParamsFile &params);
ParamsFile load_params(const std::string &path);

void save_metrics_csv(const std::string &path, const std::vector<MetricsRecord> &metrics);
std::vector<MetricsRecord> load_metrics_csv(const std::string &path);

} // namespace qgcn
