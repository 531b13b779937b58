#pragma once

// Latin hypercube designs, the offline dataset and per-island data splits.

#include <cstddef>
#include <filesystem>
#include <vector>

#include "islekit/benchmarks.hpp"
#include "islekit/core.hpp"

namespace islekit {

struct OfflineDataset {
    std::vector<LabeledSample> samples;
    std::size_t budget_used = 0;

    std::size_t size() const noexcept { return samples.size(); }
};

struct IslandDataSplit {
    std::vector<LabeledSample> train;
    std::vector<LabeledSample> validation;
};

/// One sample per stratum per dimension, jittered uniformly inside the stratum.
std::vector<Candidate> latin_hypercube(std::size_t n, const Bounds& bounds, RngStream& rng);

/// Evaluates an LHS design of size n on the true function. Advances the problem's
/// FE counter by exactly n.
OfflineDataset build_offline_dataset(BenchmarkProblem& problem, std::size_t n, RngStream& rng);

/// ceil(2|D|/3) samples drawn without replacement for training, the rest for validation.
IslandDataSplit partition_island_data(const OfflineDataset& dataset, RngStream& rng);

constexpr std::size_t train_size_for(std::size_t n) { return (2 * n + 2) / 3; }

/// CSV cache with header x_0,...,x_{d-1},f.
void write_dataset_csv(const OfflineDataset& dataset, const std::filesystem::path& path);
OfflineDataset read_dataset_csv(const std::filesystem::path& path);

}  // namespace islekit
