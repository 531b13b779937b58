#pragma once

// Inverse-RMSE weighting shared by pseudo-labeling, environmental selection
// and the global surrogate.

#include <memory>
#include <span>
#include <vector>

#include "islekit/core.hpp"
#include "islekit/surrogate.hpp"

namespace islekit {

struct EnsembleWeights {
    std::vector<double> weights;

    std::size_t size() const noexcept { return weights.size(); }
    double operator[](std::size_t k) const { return weights[k]; }
};

/// w_k = (S - rmse_k) / ((m - 1) S) with S the rmse sum. A single model gets
/// weight 1; S = 0 falls back to uniform weights.
EnsembleWeights inverse_rmse_weights(std::span<const double> rmses);

using ModelRef = std::shared_ptr<const RbfnModel>;

double weighted_prediction(std::span<const ModelRef> models, const EnsembleWeights& weights, const Candidate& x);

/// One weighted score per input row.
Vector weighted_prediction(std::span<const ModelRef> models, const EnsembleWeights& weights,
                           const RowMatrix& inputs);

}  // namespace islekit
