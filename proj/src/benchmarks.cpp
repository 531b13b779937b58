#include "islekit/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace islekit {

double evaluate_base(BaseFunction f, const Vector& z) {
    const Eigen::Index d = z.size();
    switch (f) {
    case BaseFunction::Sphere:
        return z.squaredNorm();
    case BaseFunction::Elliptic: {
        double sum = 0.0;
        for (Eigen::Index i = 0; i < d; ++i) {
            const double exponent = d > 1 ? 6.0 * static_cast<double>(i) / static_cast<double>(d - 1) : 0.0;
            sum += std::pow(10.0, exponent) * z[i] * z[i];
        }
        return sum;
    }
    case BaseFunction::Rastrigin: {
        double sum = 0.0;
        for (Eigen::Index i = 0; i < d; ++i)
            sum += z[i] * z[i] - 10.0 * std::cos(2.0 * std::numbers::pi * z[i]) + 10.0;
        return sum;
    }
    case BaseFunction::Ackley: {
        const double n = static_cast<double>(d);
        const double sq = z.squaredNorm() / n;
        double cs = 0.0;
        for (Eigen::Index i = 0; i < d; ++i) cs += std::cos(2.0 * std::numbers::pi * z[i]);
        cs /= n;
        // Grouped so that z = 0 cancels exactly.
        return (20.0 - 20.0 * std::exp(-0.2 * std::sqrt(sq))) + (std::numbers::e - std::exp(cs));
    }
    case BaseFunction::Rosenbrock: {
        // Optimum moved from (1,...,1) to the origin.
        double sum = 0.0;
        for (Eigen::Index i = 0; i + 1 < d; ++i) {
            const double yi = z[i] + 1.0;
            const double yn = z[i + 1] + 1.0;
            sum += 100.0 * (yi * yi - yn) * (yi * yi - yn) + (yi - 1.0) * (yi - 1.0);
        }
        return sum;
    }
    case BaseFunction::Schwefel12: {
        double sum = 0.0;
        double prefix = 0.0;
        for (Eigen::Index i = 0; i < d; ++i) {
            prefix += z[i];
            sum += prefix * prefix;
        }
        return sum;
    }
    }
    throw ContractViolation("unknown base function");
}

BenchmarkProblem::BenchmarkProblem(std::string name, BaseFunction base, Bounds bounds, Vector shift,
                                   std::vector<Eigen::MatrixXd> rotation_blocks, std::uint64_t seed)
    : name_(std::move(name)),
      base_(base),
      bounds_(std::move(bounds)),
      shift_(std::move(shift)),
      rotation_(std::move(rotation_blocks)),
      seed_(seed),
      fe_counter_(std::make_unique<std::atomic<std::uint64_t>>(0)) {
    require(static_cast<std::size_t>(shift_.size()) == bounds_.dim(), "shift dimension mismatch");
    Eigen::Index covered = 0;
    for (const auto& block : rotation_) {
        require(block.rows() == block.cols(), "rotation blocks must be square");
        covered += block.rows();
    }
    require(rotation_.empty() || covered == shift_.size(), "rotation blocks must cover every dimension");
}

Vector BenchmarkProblem::transform(const Vector& x) const {
    require(static_cast<std::size_t>(x.size()) == dim(), "evaluate: dimension mismatch");
    Vector z = x - shift_;
    if (rotation_.empty()) return z;
    Vector out(z.size());
    Eigen::Index offset = 0;
    for (const auto& block : rotation_) {
        const auto k = block.rows();
        out.segment(offset, k) = block * z.segment(offset, k);
        offset += k;
    }
    return out;
}

double BenchmarkProblem::evaluate(const Candidate& x) {
    require(bounds_.contains(x.genes), "evaluate: candidate outside bounds or wrong dimension");
    auto current = fe_counter_->load();
    do {
        if (fe_limit_ && current >= *fe_limit_)
            throw BudgetExceeded("real evaluation budget exhausted on " + name_ + " (limit " +
                                 std::to_string(*fe_limit_) + ")");
    } while (!fe_counter_->compare_exchange_weak(current, current + 1));
    return evaluate_base(base_, transform(x.genes));
}

namespace {

struct Entry {
    BaseFunction base;
    bool rotated;
};

const std::map<std::string, Entry>& registry() {
    static const std::map<std::string, Entry> table = {
        {"ackley", {BaseFunction::Ackley, false}},
        {"elliptic", {BaseFunction::Elliptic, false}},
        {"rastrigin", {BaseFunction::Rastrigin, false}},
        {"rosenbrock", {BaseFunction::Rosenbrock, false}},
        {"rot_ackley", {BaseFunction::Ackley, true}},
        {"rot_elliptic", {BaseFunction::Elliptic, true}},
        {"rot_rastrigin", {BaseFunction::Rastrigin, true}},
        {"schwefel12", {BaseFunction::Schwefel12, false}},
        {"sphere", {BaseFunction::Sphere, false}},
    };
    return table;
}

Eigen::MatrixXd random_orthogonal(Eigen::Index k, RngStream& rng) {
    Eigen::MatrixXd g(k, k);
    for (Eigen::Index r = 0; r < k; ++r)
        for (Eigen::Index c = 0; c < k; ++c) g(r, c) = rng.normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(k, k);
    // Sign fix makes the distribution Haar.
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index c = 0; c < k; ++c)
        if (r(c, c) < 0.0) q.col(c) = -q.col(c);
    return q;
}

}  // namespace

const std::vector<std::string>& available_problems() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [name, entry] : registry()) out.push_back(name);
        return out;
    }();
    return names;
}

BenchmarkProblem make_problem(const std::string& name, std::size_t d, std::uint64_t seed, double lower,
                              double upper) {
    const auto it = registry().find(name);
    if (it == registry().end()) {
        std::string known;
        for (const auto& n : available_problems()) known += (known.empty() ? "" : ", ") + n;
        throw UnknownProblem("unknown function '" + name + "'; available: " + known);
    }
    if (d < 2) throw ContractViolation("benchmark problems need d >= 2");

    Bounds bounds = Bounds::box(d, lower, upper);
    RngStream root(seed, "problem/" + name + "/" + std::to_string(d));
    RngStream shift_rng = root.derive("shift");
    Vector shift(static_cast<Eigen::Index>(d));
    const double margin = 0.1 * (upper - lower);
    for (Eigen::Index j = 0; j < shift.size(); ++j) shift[j] = shift_rng.uniform(lower + margin, upper - margin);

    std::vector<Eigen::MatrixXd> blocks;
    if (it->second.rotated) {
        RngStream rot_rng = root.derive("rotation");
        const std::size_t block = std::min<std::size_t>(d, 50);
        for (std::size_t offset = 0; offset < d; offset += block) {
            const auto k = static_cast<Eigen::Index>(std::min(block, d - offset));
            blocks.push_back(random_orthogonal(k, rot_rng));
        }
    }
    return BenchmarkProblem(name, it->second.base, std::move(bounds), std::move(shift), std::move(blocks), seed);
}

nlohmann::json problem_manifest(const BenchmarkProblem& problem) {
    const auto& b = problem.bounds();
    return {{"name", problem.name()},
            {"d", problem.dim()},
            {"seed", problem.seed()},
            {"bounds", {b.lower()[0], b.upper()[0]}}};
}

BenchmarkProblem problem_from_manifest(const nlohmann::json& manifest) {
    const auto bounds = manifest.value("bounds", std::vector<double>{-5.0, 5.0});
    if (bounds.size() != 2) throw ContractViolation("manifest bounds must be [lower, upper]");
    return make_problem(manifest.at("name").get<std::string>(), manifest.at("d").get<std::size_t>(),
                        manifest.at("seed").get<std::uint64_t>(), bounds[0], bounds[1]);
}

}  // namespace islekit
