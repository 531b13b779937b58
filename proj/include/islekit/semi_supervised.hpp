#pragma once

// Neighbor-disagreement pseudo-labeling and the temporary-augmentation refit
// each island performs before producing offspring.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "islekit/island.hpp"

namespace islekit {

struct DiscrepancyReport {
    std::vector<double> means;  // mean neighbor prediction per individual
    std::vector<double> divs;   // population std-dev of neighbor predictions
};

struct PseudoBatch {
    std::vector<Candidate> candidates;
    std::vector<double> labels;
};

DiscrepancyReport neighbor_discrepancy(const std::vector<Candidate>& population,
                                       std::span<const ModelRef> neighbor_models);

/// Indices of the l smallest discrepancies, ordered by (div, index).
std::vector<std::size_t> select_pseudo_candidates(const DiscrepancyReport& report, std::size_t l);

PseudoBatch pseudo_labels(const std::vector<Candidate>& candidates, std::span<const ModelRef> neighbor_models,
                          std::span<const double> neighbor_rmses);

struct FineTuneResult {
    RbfnModel model;
    ValidationScore score;
};

/// Augments D_i with l pseudo-labeled members, refits the output layer, scores
/// on V_i and removes the pseudo samples again. D_i is unchanged on return.
/// `on_augmented` sees the augmented training set just before the refit.
FineTuneResult fine_tune_island(IslandState& island, const SharedBoard& board, std::size_t l,
                                const std::function<void(const std::vector<LabeledSample>&)>& on_augmented = {});

}  // namespace islekit
