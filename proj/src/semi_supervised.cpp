#include "islekit/semi_supervised.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace islekit {

DiscrepancyReport neighbor_discrepancy(const std::vector<Candidate>& population,
                                       std::span<const ModelRef> neighbor_models) {
    require(!neighbor_models.empty(), "neighbor_discrepancy: no neighbor models");
    require(!population.empty(), "neighbor_discrepancy: empty population");
    const RowMatrix inputs = stack(population);
    const auto n = inputs.rows();
    const auto omega = static_cast<Eigen::Index>(neighbor_models.size());
    Eigen::MatrixXd predictions(n, omega);
    for (Eigen::Index k = 0; k < omega; ++k) predictions.col(k) = predict(*neighbor_models[k], inputs);

    DiscrepancyReport report;
    report.means.resize(static_cast<std::size_t>(n));
    report.divs.resize(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < n; ++j) {
        const double mean = predictions.row(j).mean();
        const double var = (predictions.row(j).array() - mean).square().mean();
        report.means[static_cast<std::size_t>(j)] = mean;
        report.divs[static_cast<std::size_t>(j)] = std::sqrt(var);
    }
    return report;
}

std::vector<std::size_t> select_pseudo_candidates(const DiscrepancyReport& report, std::size_t l) {
    const std::size_t n = report.divs.size();
    require(l <= n, "select_pseudo_candidates: l exceeds population size");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(l), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          if (report.divs[a] != report.divs[b]) return report.divs[a] < report.divs[b];
                          return a < b;
                      });
    order.resize(l);
    return order;
}

PseudoBatch pseudo_labels(const std::vector<Candidate>& candidates, std::span<const ModelRef> neighbor_models,
                          std::span<const double> neighbor_rmses) {
    require(neighbor_models.size() == neighbor_rmses.size(), "pseudo_labels: models/rmses length mismatch");
    PseudoBatch batch;
    batch.candidates = candidates;
    if (candidates.empty()) return batch;
    const auto weights = inverse_rmse_weights(neighbor_rmses);
    const Vector y = weighted_prediction(neighbor_models, weights, stack(candidates));
    batch.labels.assign(y.begin(), y.end());
    return batch;
}

namespace {

/// Pops the temporary pseudo samples off D_i however the refit exits.
class AugmentationGuard {
public:
    AugmentationGuard(std::vector<LabeledSample>& data, const PseudoBatch& batch) : data_(data), base_(data.size()) {
        for (std::size_t k = 0; k < batch.candidates.size(); ++k)
            data_.push_back({batch.candidates[k], batch.labels[k], Provenance::Pseudo});
    }
    ~AugmentationGuard() { data_.resize(base_); }
    AugmentationGuard(const AugmentationGuard&) = delete;
    AugmentationGuard& operator=(const AugmentationGuard&) = delete;

private:
    std::vector<LabeledSample>& data_;
    std::size_t base_;
};

}  // namespace

FineTuneResult fine_tune_island(IslandState& island, const SharedBoard& board, std::size_t l,
                                const std::function<void(const std::vector<LabeledSample>&)>& on_augmented) {
    require(island.model != nullptr, "fine_tune_island: island has no model");
    std::vector<ModelRef> models;
    std::vector<double> rmses;
    models.reserve(island.neighbors.size());
    for (std::size_t o : island.neighbors) {
        auto entry = board.require_entry(o);
        models.push_back(std::move(entry.model));
        rmses.push_back(entry.rmse.rmse);
    }

    PseudoBatch batch;
    if (l > 0) {
        const auto& members = island.population.members;
        const auto report = neighbor_discrepancy(members, models);
        std::vector<Candidate> chosen;
        for (std::size_t idx : select_pseudo_candidates(report, l)) chosen.push_back(members[idx]);
        batch = pseudo_labels(chosen, models, rmses);
    }

    AugmentationGuard guard(island.train, batch);
    if (on_augmented) on_augmented(island.train);
    FineTuneResult result{refit_weights(*island.model, island.train), {}};
    result.score = validation_rmse(result.model, island.validation);
    return result;
}

}  // namespace islekit
