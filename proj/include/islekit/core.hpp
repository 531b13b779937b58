#pragma once

/// @file core.hpp
/// Shared domain types for the island optimizer: box bounds, candidates,
/// labeled samples, the error hierarchy and labeled random streams.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace islekit {

using Vector = Eigen::VectorXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller broke a documented precondition (dimension mismatch, bad simplex...).
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// Not enough samples or points for the requested fit/split.
class InsufficientData : public Error {
public:
    using Error::Error;
};

/// A real objective evaluation was requested beyond the allowed budget.
class BudgetExceeded : public Error {
public:
    using Error::Error;
};

/// A neighbor slot on the shared board had nothing published.
class BoardStale : public Error {
public:
    using Error::Error;
};

/// Invalid run configuration. `key()` names the offending field.
class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& what)
        : Error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

inline void require(bool condition, const char* message) {
    if (!condition) throw ContractViolation(message);
}

// ---------------------------------------------------------------------------
// Search space
// ---------------------------------------------------------------------------

class Bounds {
public:
    Bounds(Vector lower, Vector upper);

    /// The hypercube [lo, hi]^d.
    static Bounds box(std::size_t d, double lo, double hi);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(lower_.size()); }
    const Vector& lower() const noexcept { return lower_; }
    const Vector& upper() const noexcept { return upper_; }
    Vector width() const { return upper_ - lower_; }

    bool contains(const Vector& x) const;

private:
    Vector lower_;
    Vector upper_;
};

struct Candidate {
    Vector genes;

    Candidate() = default;
    explicit Candidate(Vector g) : genes(std::move(g)) {}
    Candidate(std::initializer_list<double> values);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(genes.size()); }
    double operator[](std::size_t j) const { return genes[static_cast<Eigen::Index>(j)]; }

    friend bool operator==(const Candidate& a, const Candidate& b) {
        return a.genes.size() == b.genes.size() && a.genes == b.genes;
    }
};

/// Projects every gene onto [lower, upper]. Genes already inside are untouched.
Candidate clamp(const Candidate& candidate, const Bounds& bounds);

enum class Provenance { Real, Pseudo };

struct LabeledSample {
    Candidate candidate;
    double label = 0.0;
    Provenance provenance = Provenance::Real;
};

/// Stacks candidates into an N x d row-major matrix.
RowMatrix stack(const std::vector<Candidate>& candidates);
RowMatrix stack_inputs(const std::vector<LabeledSample>& samples);
Vector stack_labels(const std::vector<LabeledSample>& samples);

// ---------------------------------------------------------------------------
// Randomness
// ---------------------------------------------------------------------------

/// Counter-based random stream keyed by (seed, label path).
///
/// The sequence produced by a stream depends only on its seed and label, never
/// on which other streams were created or consumed before it, so per-island work
/// replays identically regardless of scheduling. Satisfies
/// UniformRandomBitGenerator so it can drive std::shuffle and friends.
class RngStream {
public:
    using result_type = std::uint64_t;

    explicit RngStream(std::uint64_t seed, std::string label = "");

    /// Child stream at path `label() + "/" + child`. Independent of this
    /// stream's consumption state.
    RngStream derive(std::string_view child) const;

    std::uint64_t seed() const noexcept { return seed_; }
    const std::string& label() const noexcept { return label_; }
    std::uint64_t draws() const noexcept { return counter_; }

    result_type operator()() { return next(); }
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    std::uint64_t next();
    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [0, n). n must be positive.
    std::size_t below(std::size_t n);
    double normal();

    /// Uniformly random permutation of 0..n-1.
    std::vector<std::size_t> permutation(std::size_t n);
    /// k distinct indices from 0..n-1, uniformly without replacement.
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

private:
    std::uint64_t seed_;
    std::string label_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

RngStream derive_stream(const RngStream& root, std::string_view label);

}  // namespace islekit
