#include "islekit/core.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace islekit {

Bounds::Bounds(Vector lower, Vector upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
    require(lower_.size() >= 1, "bounds need at least one dimension");
    require(lower_.size() == upper_.size(), "bounds dimension mismatch");
    for (Eigen::Index j = 0; j < lower_.size(); ++j)
        require(lower_[j] < upper_[j], "bounds require lower < upper in every dimension");
}

Bounds Bounds::box(std::size_t d, double lo, double hi) {
    const auto n = static_cast<Eigen::Index>(d);
    return Bounds(Vector::Constant(n, lo), Vector::Constant(n, hi));
}

bool Bounds::contains(const Vector& x) const {
    if (x.size() != lower_.size()) return false;
    return (x.array() >= lower_.array()).all() && (x.array() <= upper_.array()).all();
}

Candidate::Candidate(std::initializer_list<double> values) : genes(static_cast<Eigen::Index>(values.size())) {
    Eigen::Index j = 0;
    for (double v : values) genes[j++] = v;
}

Candidate clamp(const Candidate& candidate, const Bounds& bounds) {
    require(candidate.dim() == bounds.dim(), "clamp: dimension mismatch");
    return Candidate(candidate.genes.cwiseMax(bounds.lower()).cwiseMin(bounds.upper()));
}

RowMatrix stack(const std::vector<Candidate>& candidates) {
    if (candidates.empty()) return RowMatrix(0, 0);
    const auto d = candidates.front().genes.size();
    RowMatrix out(static_cast<Eigen::Index>(candidates.size()), d);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        require(candidates[i].genes.size() == d, "stack: ragged candidate dimensions");
        out.row(static_cast<Eigen::Index>(i)) = candidates[i].genes.transpose();
    }
    return out;
}

RowMatrix stack_inputs(const std::vector<LabeledSample>& samples) {
    if (samples.empty()) return RowMatrix(0, 0);
    const auto d = samples.front().candidate.genes.size();
    RowMatrix out(static_cast<Eigen::Index>(samples.size()), d);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        require(samples[i].candidate.genes.size() == d, "stack: ragged sample dimensions");
        out.row(static_cast<Eigen::Index>(i)) = samples[i].candidate.genes.transpose();
    }
    return out;
}

Vector stack_labels(const std::vector<LabeledSample>& samples) {
    Vector y(static_cast<Eigen::Index>(samples.size()));
    for (std::size_t i = 0; i < samples.size(); ++i) y[static_cast<Eigen::Index>(i)] = samples[i].label;
    return y;
}

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::string label)
    : seed_(seed), label_(std::move(label)), key_(mix64(mix64(seed + kGolden) ^ fnv1a(label_))) {}

RngStream RngStream::derive(std::string_view child) const {
    std::string path = label_;
    if (!path.empty()) path += '/';
    path += child;
    return RngStream(seed_, std::move(path));
}

std::uint64_t RngStream::next() {
    ++counter_;
    return mix64(key_ + counter_ * kGolden);
}

double RngStream::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::size_t RngStream::below(std::size_t n) {
    require(n > 0, "below(n) requires n > 0");
    // Rejection keeps the draw exactly uniform.
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = max() - (max() % bound + 1) % bound;
    std::uint64_t x = next();
    while (x > limit) x = next();
    return static_cast<std::size_t>(x % bound);
}

double RngStream::normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<std::size_t> RngStream::permutation(std::size_t n) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[below(i)]);
    return p;
}

std::vector<std::size_t> RngStream::sample_without_replacement(std::size_t n, std::size_t k) {
    require(k <= n, "cannot sample more items than available");
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) std::swap(p[i], p[i + below(n - i)]);
    p.resize(k);
    return p;
}

RngStream derive_stream(const RngStream& root, std::string_view label) { return root.derive(label); }

}  // namespace islekit
