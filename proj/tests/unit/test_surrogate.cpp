#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "islekit/surrogate.hpp"
#include "oracles.hpp"

using namespace islekit;

namespace {

std::vector<LabeledSample> make_samples(std::size_t n, std::size_t d, RngStream& rng) {
    std::vector<LabeledSample> out;
    for (std::size_t i = 0; i < n; ++i) {
        Vector x(static_cast<Eigen::Index>(d));
        for (auto& v : x) v = rng.uniform(-2, 2);
        out.push_back({Candidate(x), x.squaredNorm() + std::sin(3 * x[0]), Provenance::Real});
    }
    return out;
}

RbfnModel fixed_model(RowMatrix centers, double sigma, Vector w, double bias) {
    RbfnModel m;
    m.centers = std::move(centers);
    m.sigma = sigma;
    m.weights = std::move(w);
    m.bias = bias;
    return m;
}

}  // namespace

TEST_CASE("k-means with one point per cluster returns the points") {
    RowMatrix pts(5, 2);
    pts << 0, 0, 1, 5, 3, 2, -4, 1, 2, -3;
    RngStream rng(1, "km");
    const RowMatrix c = kmeans_centers(pts, 5, rng);
    for (Eigen::Index i = 0; i < 5; ++i) {
        bool found = false;
        for (Eigen::Index k = 0; k < 5; ++k) found |= (c.row(k) - pts.row(i)).norm() == 0.0;
        CHECK(found);
    }
}

TEST_CASE("k-means on 4-point lines matches exhaustive 2-partition") {
    // Two tight pairs separated by a wide gap: the optimal partition is the
    // only fixed point of Lloyd's iteration, whatever the seeds.
    RngStream gen(2, "lines");
    for (int t = 0; t < 500; ++t) {
        const double a = gen.uniform(-10, 10), s1 = gen.uniform(0, 2), s2 = gen.uniform(0, 2);
        const double gap = 3 * std::max(s1, s2) + gen.uniform(0.01, 10);
        std::vector<double> p{a, a + s1, a + s1 + gap, a + s1 + gap + s2};
        std::swap(p[gen.below(4)], p[gen.below(4)]);
        RowMatrix pts(4, 1);
        for (int i = 0; i < 4; ++i) pts(i, 0) = p[static_cast<std::size_t>(i)];
        const auto want = oracle::exhaustive_two_means(p);
        RngStream rng(static_cast<std::uint64_t>(t), "km");
        const RowMatrix c = kmeans_centers(pts, 2, rng);
        CHECK(std::min(c(0, 0), c(1, 0)) == want.first);
        CHECK(std::max(c(0, 0), c(1, 0)) == want.second);
    }
    RowMatrix pts(4, 1);
    pts << 0, 1, 9, 10;
    for (int s = 0; s < 10; ++s) {
        RngStream rng(static_cast<std::uint64_t>(s), "km");
        const RowMatrix c = kmeans_centers(pts, 2, rng);
        CHECK(std::min(c(0, 0), c(1, 0)) == 0.5);
        CHECK(std::max(c(0, 0), c(1, 0)) == 9.5);
    }
}

TEST_CASE("single cluster is the mean") {
    RowMatrix pts(3, 2);
    pts << 0, 0, 3, 3, 6, 0;
    RngStream rng(3, "km");
    const RowMatrix c = kmeans_centers(pts, 1, rng);
    CHECK(c(0, 0) == doctest::Approx(3.0));
    CHECK(c(0, 1) == doctest::Approx(1.0));
    CHECK_THROWS_AS(kmeans_centers(pts, 4, rng), InsufficientData);
}

TEST_CASE("spread heuristic") {
    RowMatrix c(2, 1);
    c << 0, 4;
    CHECK(compute_sigma(c) == doctest::Approx(2.0));
    CHECK(compute_sigma(c, SpreadRule::MaxDistance) == doctest::Approx(4.0));
    CHECK(spread_rule_from_string(to_string(SpreadRule::MaxDistance)) == SpreadRule::MaxDistance);
    CHECK_THROWS_AS(spread_rule_from_string("wide"), ConfigError);
    RowMatrix one(1, 3);
    one << 1, 2, 3;
    CHECK(compute_sigma(one) == 1.0);
    RowMatrix same(3, 2);
    same << 1, 1, 1, 1, 1, 1;
    CHECK(compute_sigma(same) == 1.0);
}

TEST_CASE("predict at hand-evaluated points") {
    RowMatrix c(1, 2);
    c << 0.5, -1.0;
    Vector w(1);
    w << 1.0;
    CHECK(predict(fixed_model(c, 1.3, w, 0.0), Candidate{0.5, -1.0}) == doctest::Approx(1.0).epsilon(1e-15));

    RowMatrix c3(3, 1);
    c3 << 0, 1, 2;
    CHECK(predict(fixed_model(c3, 1.0, Vector::Zero(3), 4.5), Candidate{17.0}) == 4.5);

    RowMatrix c1(1, 1);
    c1 << 0.0;
    Vector w2(1);
    w2 << 2.0;
    CHECK(predict(fixed_model(c1, 1.0, w2, 0.0), Candidate{1.0}) == doctest::Approx(2.0 * std::exp(-0.5)));
    CHECK(2.0 * std::exp(-0.5) == doctest::Approx(1.2131).epsilon(1e-4));
    CHECK_THROWS_AS(predict(fixed_model(c1, 1.0, w2, 0.0), Candidate{1.0, 2.0}), ContractViolation);
    CHECK_THROWS_AS(predict(fixed_model(c1, 1.0, w2, 0.0), Candidate{std::nan("")}), ContractViolation);
}

TEST_CASE("predict is bounded by the absolute weight mass") {
    RngStream rng(4, "bound");
    auto data = make_samples(40, 3, rng);
    auto m = train_rbfn(data, 7, rng);
    const double bound = m.weights.cwiseAbs().sum() + std::abs(m.bias);
    for (int t = 0; t < 200; ++t) {
        Candidate x{rng.uniform(-20, 20), rng.uniform(-20, 20), rng.uniform(-20, 20)};
        CHECK(std::abs(predict(m, x)) <= bound + 1e-12);
    }
}

TEST_CASE("least squares matches a normal-equations oracle on small instances") {
    RngStream rng(5, "oracle");
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 3 + rng.below(6);  // 3..8
        const std::size_t c = 1 + rng.below(std::min<std::size_t>(3, n - 1));
        auto data = make_samples(n, 2, rng);
        auto m = train_rbfn(data, c, rng);
        const auto phi = activations(m, stack_inputs(data));
        oracle::Matrix a(n, std::vector<double>(c + 1, 1.0));
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < c; ++k)
                a[i][k] = phi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
            y[i] = data[i].label;
        }
        const auto ref = oracle::normal_equations(a, y);
        // Compare fitted values: they are unique even when the weights are not.
        double err = 0, norm = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double f = ref[c];
            for (std::size_t k = 0; k < c; ++k) f += a[i][k] * ref[k];
            const double mine = predict(m, data[i].candidate);
            err += (mine - f) * (mine - f);
            norm += f * f;
        }
        CHECK(std::sqrt(err) <= 1e-6 * std::max(1.0, std::sqrt(norm)));
    }
}

TEST_CASE("N = C distinct points interpolate exactly") {
    RngStream rng(6, "interp");
    auto data = make_samples(6, 2, rng);
    auto m = train_rbfn(data, 6, rng);
    double res = 0, norm = 0;
    for (const auto& s : data) {
        res += std::pow(predict(m, s.candidate) - s.label, 2);
        norm += s.label * s.label;
    }
    CHECK(std::sqrt(res) < 1e-6 * std::sqrt(norm));
}

TEST_CASE("constant labels and duplicate rows") {
    RngStream rng(7, "const");
    auto data = make_samples(20, 3, rng);
    for (auto& s : data) s.label = 3.25;
    auto m = train_rbfn(data, 5, rng);
    for (const auto& s : data) CHECK(std::abs(predict(m, s.candidate) - 3.25) < 1e-8);

    std::vector<LabeledSample> dup(6, data[0]);
    dup.push_back(data[1]);
    dup.push_back(data[1]);
    auto md = train_rbfn(dup, 2, rng);
    CHECK(std::isfinite(predict(md, data[0].candidate)));
}

TEST_CASE("least squares is never worse than the best constant") {
    RngStream rng(8, "const-bound");
    for (int t = 0; t < 20; ++t) {
        auto data = make_samples(30, 4, rng);
        auto m = train_rbfn(data, default_center_count(data.size()), rng);
        double mean = 0;
        for (const auto& s : data) mean += s.label;
        mean /= static_cast<double>(data.size());
        RbfnModel constant = m;
        constant.weights.setZero();
        constant.bias = mean;
        CHECK(validation_rmse(m, data).rmse <= validation_rmse(constant, data).rmse + 1e-9);
    }
}

TEST_CASE("validation RMSE") {
    RowMatrix c(1, 1);
    c << 0.0;
    auto zero = fixed_model(c, 1.0, Vector::Zero(1), 0.0);
    std::vector<LabeledSample> v{{Candidate{1.0}, 3.0, Provenance::Real}, {Candidate{2.0}, -4.0, Provenance::Real}};
    CHECK(validation_rmse(zero, v).rmse == doctest::Approx(std::sqrt(12.5)));
    CHECK(validation_rmse(zero, {{Candidate{1.0}, -2.5, Provenance::Real}}).rmse == doctest::Approx(2.5));
    CHECK(validation_rmse(zero, {{Candidate{1.0}, 0.0, Provenance::Real}}).rmse == 0.0);
    CHECK_THROWS_AS(validation_rmse(zero, {}), InsufficientData);
}

TEST_CASE("refit keeps centers, bumps version and absorbs label shifts in the bias") {
    RngStream rng(9, "refit");
    auto data = make_samples(25, 3, rng);
    auto m = train_rbfn(data, 5, rng);
    CHECK(m.version == 1);
    auto again = refit_weights(m, data);
    CHECK(again.version == 2);
    CHECK(again.centers == m.centers);
    for (const auto& s : data) CHECK(std::abs(predict(again, s.candidate) - predict(m, s.candidate)) < 1e-10);

    auto shifted = data;
    for (auto& s : shifted) s.label += 7.5;
    auto ms = refit_weights(m, shifted);
    for (int t = 0; t < 50; ++t) {
        Candidate x{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
        CHECK(predict(ms, x) - predict(m, x) == doctest::Approx(7.5).epsilon(1e-8));
    }
}

TEST_CASE("center count and json roundtrip") {
    CHECK(default_center_count(334) == 19);
    CHECK(default_center_count(9) == 3);
    CHECK(default_center_count(10) == 4);
    RngStream rng(10, "json");
    auto data = make_samples(12, 2, rng);
    auto m = train_rbfn(data, 3, rng);
    auto back = model_from_json(to_json(m));
    CHECK(back.centers == m.centers);
    CHECK(back.weights == m.weights);
    CHECK(back.bias == m.bias);
    CHECK(back.version == m.version);
}
