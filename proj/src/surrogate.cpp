#include "islekit/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace islekit {

namespace {

std::vector<std::size_t> assign(const RowMatrix& points, const RowMatrix& centers, std::vector<double>& dist) {
    const auto n = points.rows();
    std::vector<std::size_t> labels(static_cast<std::size_t>(n));
    dist.assign(static_cast<std::size_t>(n), 0.0);
    for (Eigen::Index i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        for (Eigen::Index c = 0; c < centers.rows(); ++c) {
            const double dd = (points.row(i) - centers.row(c)).squaredNorm();
            if (dd < best) {
                best = dd;
                arg = static_cast<std::size_t>(c);
            }
        }
        labels[static_cast<std::size_t>(i)] = arg;
        dist[static_cast<std::size_t>(i)] = best;
    }
    return labels;
}

Eigen::MatrixXd design_matrix(const RbfnModel& model, const RowMatrix& inputs) {
    const auto n = inputs.rows();
    const auto c = model.centers.rows();
    Eigen::MatrixXd design(n, c + 1);
    design.leftCols(c) = activations(model, inputs);
    design.col(c).setOnes();
    return design;
}

void assign_layer(RbfnModel& model, const Vector& solution) {
    const auto c = model.centers.rows();
    model.weights = solution.head(c);
    model.bias = solution[c];
}

}  // namespace

RowMatrix kmeans_centers(const RowMatrix& points, std::size_t num_centers, RngStream& rng,
                         const KMeansOptions& options) {
    const auto n = static_cast<std::size_t>(points.rows());
    if (num_centers == 0) throw ContractViolation("kmeans_centers: need at least one center");
    if (n < num_centers) throw InsufficientData("kmeans_centers: fewer points than centers");

    const auto k = static_cast<Eigen::Index>(num_centers);
    RowMatrix centers(k, points.cols());
    const auto seeds = rng.sample_without_replacement(n, num_centers);
    for (Eigen::Index c = 0; c < k; ++c) centers.row(c) = points.row(static_cast<Eigen::Index>(seeds[c]));

    std::vector<double> dist;
    std::vector<std::size_t> labels;
    for (std::size_t iter = 0; iter < options.max_iter; ++iter) {
        auto next_labels = assign(points, centers, dist);
        if (iter > 0 && next_labels == labels) break;
        labels = std::move(next_labels);

        RowMatrix updated = RowMatrix::Zero(k, points.cols());
        std::vector<std::size_t> counts(num_centers, 0);
        for (std::size_t i = 0; i < n; ++i) {
            updated.row(static_cast<Eigen::Index>(labels[i])) += points.row(static_cast<Eigen::Index>(i));
            ++counts[labels[i]];
        }
        std::vector<bool> taken(n, false);
        for (std::size_t c = 0; c < num_centers; ++c) {
            const auto row = static_cast<Eigen::Index>(c);
            if (counts[c] > 0) {
                updated.row(row) /= static_cast<double>(counts[c]);
                continue;
            }
            // Empty cluster: re-seed at the point worst served by its center.
            std::size_t far = 0;
            double worst = -1.0;
            for (std::size_t i = 0; i < n; ++i)
                if (!taken[i] && dist[i] > worst) {
                    worst = dist[i];
                    far = i;
                }
            taken[far] = true;
            dist[far] = 0.0;
            updated.row(row) = points.row(static_cast<Eigen::Index>(far));
        }
        const double shift = (updated - centers).rowwise().norm().maxCoeff();
        centers = std::move(updated);
        if (shift < options.tol) break;
    }
    return centers;
}

std::string to_string(SpreadRule rule) {
    return rule == SpreadRule::MaxDistance ? "dmax" : "dmax_sqrt2c";
}

SpreadRule spread_rule_from_string(const std::string& name) {
    if (name == "dmax_sqrt2c") return SpreadRule::MaxDistanceOverSqrt2C;
    if (name == "dmax") return SpreadRule::MaxDistance;
    throw ConfigError("sigma_rule", "expected 'dmax_sqrt2c' or 'dmax', got '" + name + "'");
}

double compute_sigma(const RowMatrix& centers, SpreadRule rule) {
    const auto c = centers.rows();
    if (c <= 1) return 1.0;
    double dmax = 0.0;
    for (Eigen::Index a = 0; a < c; ++a)
        for (Eigen::Index b = a + 1; b < c; ++b) dmax = std::max(dmax, (centers.row(a) - centers.row(b)).norm());
    if (dmax <= 0.0) return 1.0;
    if (rule == SpreadRule::MaxDistance) return dmax;
    return dmax / std::sqrt(2.0 * static_cast<double>(c));
}

Eigen::MatrixXd activations(const RbfnModel& model, const RowMatrix& inputs) {
    require(inputs.cols() == model.centers.cols(), "predict: dimension mismatch");
    const auto n = inputs.rows();
    const auto c = model.centers.rows();
    const double scale = -1.0 / (2.0 * model.sigma * model.sigma);
    Eigen::MatrixXd phi(n, c);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < c; ++k)
            phi(i, k) = std::exp(scale * (inputs.row(i) - model.centers.row(k)).squaredNorm());
    return phi;
}

double predict(const RbfnModel& model, const Candidate& x) {
    require(x.dim() == model.dim(), "predict: dimension mismatch");
    require(x.genes.allFinite(), "predict: non-finite input");
    const double scale = -1.0 / (2.0 * model.sigma * model.sigma);
    double out = model.bias;
    for (Eigen::Index k = 0; k < model.centers.rows(); ++k)
        out += model.weights[k] * std::exp(scale * (x.genes.transpose() - model.centers.row(k)).squaredNorm());
    return out;
}

Vector predict(const RbfnModel& model, const RowMatrix& inputs) {
    require(inputs.allFinite(), "predict: non-finite input");
    Vector out = activations(model, inputs) * model.weights;
    out.array() += model.bias;
    return out;
}

Vector solve_output_layer(const Eigen::MatrixXd& design, const Vector& targets) {
    require(design.rows() == targets.size(), "least squares: row count mismatch");
    Eigen::BDCSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-10);
    return svd.solve(targets);
}

RbfnModel train_rbfn(const std::vector<LabeledSample>& data, std::size_t num_centers, RngStream& rng,
                     const KMeansOptions& options, SpreadRule spread) {
    if (data.size() < num_centers || data.empty())
        throw InsufficientData("train_rbfn: fewer samples than centers");
    const RowMatrix inputs = stack_inputs(data);
    RbfnModel model;
    model.centers = kmeans_centers(inputs, num_centers, rng, options);
    model.sigma = compute_sigma(model.centers, spread);
    assign_layer(model, solve_output_layer(design_matrix(model, inputs), stack_labels(data)));
    model.version = 1;
    return model;
}

RbfnModel refit_weights(const RbfnModel& model, const std::vector<LabeledSample>& data) {
    if (data.empty()) throw InsufficientData("refit_weights: no data");
    RbfnModel out = model;
    assign_layer(out, solve_output_layer(design_matrix(model, stack_inputs(data)), stack_labels(data)));
    out.version = model.version + 1;
    return out;
}

ValidationScore validation_rmse(const RbfnModel& model, const std::vector<LabeledSample>& validation) {
    if (validation.empty()) throw InsufficientData("validation_rmse: empty validation set");
    const Vector residual = predict(model, stack_inputs(validation)) - stack_labels(validation);
    return {std::sqrt(residual.squaredNorm() / static_cast<double>(residual.size()))};
}

std::size_t default_center_count(std::size_t training_size) {
    auto c = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(training_size))));
    while (c * c < training_size) ++c;
    while (c > 1 && (c - 1) * (c - 1) >= training_size) --c;
    return std::max<std::size_t>(c, 1);
}

nlohmann::json to_json(const RbfnModel& model) {
    nlohmann::json centers = nlohmann::json::array();
    for (Eigen::Index r = 0; r < model.centers.rows(); ++r) {
        std::vector<double> row(model.centers.row(r).begin(), model.centers.row(r).end());
        centers.push_back(row);
    }
    return {{"centers", centers},
            {"sigma", model.sigma},
            {"weights", std::vector<double>(model.weights.begin(), model.weights.end())},
            {"bias", model.bias},
            {"version", model.version}};
}

RbfnModel model_from_json(const nlohmann::json& j) {
    RbfnModel model;
    const auto rows = j.at("centers").get<std::vector<std::vector<double>>>();
    const auto d = rows.empty() ? 0 : rows.front().size();
    model.centers.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        require(rows[r].size() == d, "model json: ragged centers");
        for (std::size_t c = 0; c < d; ++c)
            model.centers(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
    const auto w = j.at("weights").get<std::vector<double>>();
    require(w.size() == rows.size(), "model json: weights/centers mismatch");
    model.weights = Eigen::Map<const Vector>(w.data(), static_cast<Eigen::Index>(w.size()));
    model.sigma = j.at("sigma").get<double>();
    model.bias = j.at("bias").get<double>();
    model.version = j.at("version").get<std::uint64_t>();
    return model;
}

}  // namespace islekit
