#pragma once

// Gaussian radial basis function networks: k-means centers, a shared spread,
// and a closed-form least-squares output layer.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "islekit/core.hpp"

namespace islekit {

struct RbfnModel {
    RowMatrix centers;  // C x d
    double sigma = 1.0;
    Vector weights;  // length C
    double bias = 0.0;
    std::uint64_t version = 0;

    std::size_t num_centers() const noexcept { return static_cast<std::size_t>(centers.rows()); }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(centers.cols()); }
};

struct ValidationScore {
    double rmse = 0.0;
};

struct KMeansOptions {
    std::size_t max_iter = 100;
    double tol = 1e-9;
};

/// Lloyd's algorithm seeded from C distinct random rows of `points`.
RowMatrix kmeans_centers(const RowMatrix& points, std::size_t num_centers, RngStream& rng,
                         const KMeansOptions& options = {});

/// Shared Gaussian spread from the largest center-to-center distance.
enum class SpreadRule {
    MaxDistanceOverSqrt2C,  // d_max / sqrt(2C), the default
    MaxDistance,            // d_max; wider kernels for high-dimensional data
};
std::string to_string(SpreadRule rule);
SpreadRule spread_rule_from_string(const std::string& name);

/// Spread under `rule`, falling back to 1 for a single center or coincident centers.
double compute_sigma(const RowMatrix& centers, SpreadRule rule = SpreadRule::MaxDistanceOverSqrt2C);

/// N x C matrix of Gaussian activations.
Eigen::MatrixXd activations(const RbfnModel& model, const RowMatrix& inputs);

double predict(const RbfnModel& model, const Candidate& x);
Vector predict(const RbfnModel& model, const RowMatrix& inputs);

RbfnModel train_rbfn(const std::vector<LabeledSample>& data, std::size_t num_centers, RngStream& rng,
                     const KMeansOptions& options = {}, SpreadRule spread = SpreadRule::MaxDistanceOverSqrt2C);

/// Same centers and spread, output layer re-solved on `data`, version + 1.
RbfnModel refit_weights(const RbfnModel& model, const std::vector<LabeledSample>& data);

ValidationScore validation_rmse(const RbfnModel& model, const std::vector<LabeledSample>& validation);

/// ceil(sqrt(training size)).
std::size_t default_center_count(std::size_t training_size);

/// Minimum-norm least-squares solution of [Phi | 1] w = y through a truncated
/// SVD (singular values below 1e-10 * s_max dropped).
Vector solve_output_layer(const Eigen::MatrixXd& design, const Vector& targets);

/// Debug dump {centers, sigma, weights, bias, version}.
nlohmann::json to_json(const RbfnModel& model);
RbfnModel model_from_json(const nlohmann::json& j);

}  // namespace islekit
