#include "islekit/ensemble.hpp"

#include <cmath>

namespace islekit {

EnsembleWeights inverse_rmse_weights(std::span<const double> rmses) {
    const std::size_t m = rmses.size();
    require(m >= 1, "inverse_rmse_weights: empty rmse vector");
    double total = 0.0;
    for (double r : rmses) {
        require(std::isfinite(r) && r >= 0.0, "inverse_rmse_weights: rmse must be finite and non-negative");
        total += r;
    }
    EnsembleWeights out;
    if (m == 1) {
        out.weights = {1.0};
        return out;
    }
    if (total == 0.0) {
        out.weights.assign(m, 1.0 / static_cast<double>(m));
        return out;
    }
    out.weights.reserve(m);
    const double denom = static_cast<double>(m - 1) * total;
    for (double r : rmses) {
        const double w = (total - r) / denom;
        require(w >= 0.0, "inverse_rmse_weights: negative weight");
        out.weights.push_back(w);
    }
    return out;
}

double weighted_prediction(std::span<const ModelRef> models, const EnsembleWeights& weights, const Candidate& x) {
    require(models.size() == weights.size(), "weighted_prediction: models/weights length mismatch");
    double out = 0.0;
    for (std::size_t k = 0; k < models.size(); ++k) out += weights[k] * predict(*models[k], x);
    return out;
}

Vector weighted_prediction(std::span<const ModelRef> models, const EnsembleWeights& weights,
                           const RowMatrix& inputs) {
    require(models.size() == weights.size(), "weighted_prediction: models/weights length mismatch");
    Vector out = Vector::Zero(inputs.rows());
    for (std::size_t k = 0; k < models.size(); ++k) out += weights[k] * predict(*models[k], inputs);
    return out;
}

}  // namespace islekit
