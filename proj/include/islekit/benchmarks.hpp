#pragma once

// In-repo large-scale test functions built from shifted (and optionally
// block-rotated) classical base functions. Every function is minimized with
// optimum value 0 at its shift point.

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "islekit/core.hpp"

namespace islekit {

enum class BaseFunction { Sphere, Elliptic, Rastrigin, Ackley, Rosenbrock, Schwefel12 };

/// Base function on the already transformed vector z.
double evaluate_base(BaseFunction f, const Vector& z);

class BenchmarkProblem {
public:
    BenchmarkProblem(std::string name, BaseFunction base, Bounds bounds, Vector shift,
                     std::vector<Eigen::MatrixXd> rotation_blocks, std::uint64_t seed);

    BenchmarkProblem(const BenchmarkProblem&) = delete;
    BenchmarkProblem& operator=(const BenchmarkProblem&) = delete;
    BenchmarkProblem(BenchmarkProblem&&) noexcept = default;
    BenchmarkProblem& operator=(BenchmarkProblem&&) noexcept = default;

    const std::string& name() const noexcept { return name_; }
    std::size_t dim() const noexcept { return bounds_.dim(); }
    std::uint64_t seed() const noexcept { return seed_; }
    BaseFunction base() const noexcept { return base_; }
    const Bounds& bounds() const noexcept { return bounds_; }
    const Vector& shift() const noexcept { return shift_; }
    const std::vector<Eigen::MatrixXd>& rotation_blocks() const noexcept { return rotation_; }
    bool rotated() const noexcept { return !rotation_.empty(); }

    /// True fitness. Counts one real evaluation; throws BudgetExceeded when the
    /// cap would be crossed and ContractViolation outside the bounds.
    double evaluate(const Candidate& x);

    /// Transformed coordinates z = R (x - o), without touching the counter.
    Vector transform(const Vector& x) const;

    std::uint64_t fe_count() const noexcept { return fe_counter_->load(); }
    std::optional<std::uint64_t> fe_limit() const noexcept { return fe_limit_; }
    void set_fe_limit(std::optional<std::uint64_t> limit) { fe_limit_ = limit; }

private:
    std::string name_;
    BaseFunction base_;
    Bounds bounds_;
    Vector shift_;
    std::vector<Eigen::MatrixXd> rotation_;
    std::uint64_t seed_;
    std::unique_ptr<std::atomic<std::uint64_t>> fe_counter_;
    std::optional<std::uint64_t> fe_limit_;
};

class UnknownProblem : public Error {
public:
    using Error::Error;
};

/// Names accepted by make_problem.
const std::vector<std::string>& available_problems();

/// Deterministic per (name, d, seed). Names prefixed with "rot_" use
/// block-orthogonal rotations with blocks of size min(d, 50).
BenchmarkProblem make_problem(const std::string& name, std::size_t d, std::uint64_t seed,
                              double lower = -5.0, double upper = 5.0);

/// Manifest {name, d, seed, bounds}; shift and rotation are rebuilt from the seed.
nlohmann::json problem_manifest(const BenchmarkProblem& problem);
BenchmarkProblem problem_from_manifest(const nlohmann::json& manifest);

}  // namespace islekit
