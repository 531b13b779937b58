// Acceptance gate. `acceptance N` runs criterion N, no argument runs all.
// Each criterion prints one line: CRITERION <n> PASS|FAIL|SKIP: <details>.
// Exit code: 0 pass, 1 fail, 77 skip (only when the machine cannot host the test).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "islekit/experiments.hpp"
#include "islekit/semi_supervised.hpp"
#include "oracles.hpp"

using namespace islekit;

namespace {

// Pinned tolerances.
constexpr double kSimplexTol = 1e-12;       // ensemble weights
constexpr double kMpSimplexTol = 1e-9;      // per-source migration probabilities
constexpr double kConvexTol = 1e-9;         // pseudo labels vs neighbor range (absolute, scaled below)
constexpr double kLeastSquaresRel = 1e-6;   // RBFN vs normal equations
constexpr double kBlankMargin = 0.05;       // Full must beat Blank by this share of Blank's median
constexpr double kSpeedupTarget = 1.5;      // median R_s(4)
constexpr std::size_t kFineTuneWins = 7;    // of 10 seeds

enum class Status { Pass, Fail, Skip };

struct Outcome {
    Status status = Status::Pass;
    std::string detail;
};

// Collects failed checks; the first few messages end up in the summary line.
struct Checks {
    std::size_t total = 0;
    std::size_t failed = 0;
    std::vector<std::string> messages;

    void expect(bool ok, const std::string& what) {
        ++total;
        if (ok) return;
        ++failed;
        if (messages.size() < 5) messages.push_back(what);
    }
    Outcome outcome(const std::string& summary) const {
        std::ostringstream os;
        os << summary << " (" << total - failed << "/" << total << " checks)";
        for (const auto& m : messages) os << "; " << m;
        return {failed == 0 ? Status::Pass : Status::Fail, os.str()};
    }
};

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

Candidate random_candidate(std::size_t d, double lo, double hi, RngStream& rng) {
    Vector x(static_cast<Eigen::Index>(d));
    for (auto& v : x) v = rng.uniform(lo, hi);
    return Candidate(x);
}

bool same_multiset(std::vector<LabeledSample> a, std::vector<LabeledSample> b) {
    if (a.size() != b.size()) return false;
    auto less = [](const LabeledSample& x, const LabeledSample& y) {
        if (x.label != y.label) return x.label < y.label;
        return std::lexicographical_compare(x.candidate.genes.begin(), x.candidate.genes.end(),
                                            y.candidate.genes.begin(), y.candidate.genes.end());
    };
    std::sort(a.begin(), a.end(), less);
    std::sort(b.begin(), b.end(), less);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!(a[i].candidate == b[i].candidate) || a[i].label != b[i].label || a[i].provenance != b[i].provenance)
            return false;
    return true;
}

std::vector<ModelRef> neighbor_models(const IslandState& island, const SharedBoard& board,
                                      std::vector<double>* rmses = nullptr) {
    std::vector<ModelRef> models;
    for (auto o : island.neighbors) {
        const auto e = board.require_entry(o);
        models.push_back(e.model);
        if (rmses) rmses->push_back(e.rmse.rmse);
    }
    return models;
}

// ---------------------------------------------------------------- criterion 1

Outcome invariant_suite() {
    Checks c;

    RngStream rng(11, "acceptance/weights");
    for (int t = 0; t < 10000; ++t) {
        std::vector<double> rmses(1 + rng.below(40));
        for (auto& r : rmses) r = std::exp(rng.uniform(-10, 6));
        const auto w = inverse_rmse_weights(rmses);
        double sum = 0.0;
        bool nonneg = true, monotone = true;
        for (std::size_t k = 0; k < w.size(); ++k) {
            sum += w[k];
            nonneg &= w[k] >= 0.0;
            for (std::size_t j = 0; j < w.size(); ++j)
                if (rmses[k] < rmses[j]) monotone &= w[k] >= w[j];
        }
        c.expect(nonneg && monotone && std::abs(sum - 1.0) <= kSimplexTol, "weight simplex at vector " + std::to_string(t));
    }

    // A 10-epoch run inspected at every epoch boundary.
    RunConfig cfg;
    cfg.islands = 9;
    cfg.population = 12;
    cfg.t_iter = 3;
    cfg.max_iter = 30;
    cfg.budget = 80;
    cfg.early_stop = false;
    cfg.seed = 5;
    auto problem = make_problem("elliptic", 8, 0);
    {
        Orchestrator orch(cfg, problem);
        orch.initialize();
        std::vector<std::vector<LabeledSample>> initial_train;
        for (const auto& is : orch.islands()) initial_train.push_back(is.train);
        std::size_t fine_tunes = 0;
        bool more = true;
        while (more) {
            more = orch.step_epoch();
            const auto epoch = std::to_string(orch.epochs_executed());
            for (std::size_t s = 0; s < orch.ledger().islands(); ++s) {
                const auto p = orch.ledger().probabilities(s);
                const double sum = std::accumulate(p.begin(), p.end(), 0.0);
                const bool nonneg = std::all_of(p.begin(), p.end(), [](double x) { return x >= 0.0; });
                c.expect(nonneg && std::abs(sum - 1.0) <= kMpSimplexTol, "MP simplex, epoch " + epoch);
            }
            std::vector<std::size_t> incoming(orch.islands().size(), 0);
            if (more)
                for (const auto& r : orch.last_migration()) incoming[r.target] += r.migrants.size();
            for (const auto& is : orch.islands()) {
                c.expect(is.population.size() == cfg.population + incoming[is.id],
                         "population size, island " + std::to_string(is.id) + " epoch " + epoch);
                c.expect(same_multiset(is.train, initial_train[is.id]), "D_i drifted, island " + std::to_string(is.id));

                std::vector<double> rmses;
                const auto models = neighbor_models(is, orch.board(), &rmses);
                const auto batch = pseudo_labels(is.population.members, models, rmses);
                for (std::size_t j = 0; j < batch.labels.size(); ++j) {
                    double lo = INFINITY, hi = -INFINITY;
                    for (const auto& m : models) {
                        const double f = predict(*m, is.population.members[j]);
                        lo = std::min(lo, f);
                        hi = std::max(hi, f);
                    }
                    const double slack = kConvexTol * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
                    c.expect(batch.labels[j] >= lo - slack && batch.labels[j] <= hi + slack, "pseudo-label convexity");
                }

                // Independent fine-tune on a copy: augmented during the refit, restored after.
                auto copy = is;
                std::size_t during = 0, pseudo = 0;
                fine_tune_island(copy, orch.board(), cfg.pseudo_count, [&](const std::vector<LabeledSample>& d) {
                    during = d.size();
                    pseudo = static_cast<std::size_t>(std::count_if(
                        d.begin(), d.end(), [](const auto& s) { return s.provenance == Provenance::Pseudo; }));
                });
                ++fine_tunes;
                c.expect(during == is.train.size() + cfg.pseudo_count && pseudo == cfg.pseudo_count,
                         "augmented size during fine-tune");
                c.expect(same_multiset(copy.train, is.train), "D_i not restored after fine-tune");
            }
        }
        c.expect(orch.epochs_executed() == 10, "expected 10 epochs");
        const auto r = orch.finish();
        c.expect(r.real_evaluations == cfg.budget + 1, "FE accounting " + std::to_string(r.real_evaluations));
        c.expect(fine_tunes == 90, "fine-tune count");
    }
    c.expect(problem.fe_count() == cfg.budget + 1, "problem FE counter");

    // Population size after every selection: one iteration at a time.
    {
        auto p = make_problem("rastrigin", 6, 0);
        Orchestrator orch(cfg, p);
        orch.initialize();
        while (orch.step_epoch()) {
            orch.run_iterations(1);
            for (const auto& is : orch.islands())
                c.expect(is.population.size() == cfg.population, "population size after selection");
        }
    }

    // FE accounting over several budgets and variants.
    for (std::size_t budget : {20u, 57u, 150u})
        for (auto v : {AblationVariant::Full, AblationVariant::Blank, AblationVariant::NoH}) {
            auto run_cfg = apply_variant(cfg, v);
            run_cfg.budget = budget;
            run_cfg.max_iter = 9;
            auto p = make_problem("ackley", 5, 1);
            const auto r = run(run_cfg, p);
            c.expect(r.real_evaluations == budget + 1 && p.fe_count() == budget + 1,
                     "FE accounting budget " + std::to_string(budget) + " variant " + to_string(v));
        }

    return c.outcome("weights, MP simplex, pseudo-label convexity, population size, FE = budget + 1, D_i restoration");
}

// ---------------------------------------------------------------- criterion 2

std::vector<LabeledSample> small_samples(std::size_t n, std::size_t d, RngStream& rng) {
    std::vector<LabeledSample> out;
    for (std::size_t i = 0; i < n; ++i) {
        auto x = random_candidate(d, -2, 2, rng);
        const double y = x.genes.squaredNorm() + std::sin(3 * x.genes[0]);
        out.push_back({x, y, Provenance::Real});
    }
    return out;
}

Outcome oracle_equivalence() {
    Checks c;
    double worst_ls = 0.0, worst_plain = 0.0;

    RngStream rng(21, "acceptance/ls");
    for (int t = 0; t < 1000; ++t) {
        const std::size_t n = 2 + rng.below(7);  // 2..8
        const std::size_t centers = 1 + rng.below(std::min<std::size_t>(3, n - 1));
        const auto data = small_samples(n, 1 + rng.below(3), rng);
        const auto m = train_rbfn(data, centers, rng);
        const auto phi = activations(m, stack_inputs(data));
        oracle::Matrix a(n, std::vector<double>(centers + 1, 1.0));
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < centers; ++k)
                a[i][k] = phi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
            y[i] = data[i].label;
        }
        // Fitted values are unique even if the weights are not. The single
        // ridge solve is biased by about ridge / s_min^2 on near-singular
        // designs, so the refined solve is the reference and the plain one is
        // only reported.
        auto fitted_error = [&](const std::vector<double>& ref) {
            double err = 0, norm = 0;
            for (std::size_t i = 0; i < n; ++i) {
                double f = ref[centers];
                for (std::size_t k = 0; k < centers; ++k) f += a[i][k] * ref[k];
                const double mine = predict(m, data[i].candidate);
                err += (mine - f) * (mine - f);
                norm += f * f;
            }
            return std::sqrt(err) / std::max(1.0, std::sqrt(norm));
        };
        const double rel = fitted_error(oracle::refined_normal_equations(a, y));
        worst_ls = std::max(worst_ls, rel);
        worst_plain = std::max(worst_plain, fitted_error(oracle::normal_equations(a, y)));
        c.expect(rel <= kLeastSquaresRel, "least squares rel err " + fmt(rel));
    }

    // Selection against a brute-force sort, with duplicates in the pool.
    RunConfig cfg;
    cfg.islands = 4;
    cfg.population = 10;
    cfg.t_iter = 5;
    cfg.max_iter = 20;
    cfg.budget = 60;
    auto problem = make_problem("rastrigin", 4, 0);
    Orchestrator orch(cfg, problem);
    orch.initialize();
    RngStream sel_rng(22, "acceptance/select");
    for (const auto& island : orch.islands()) {
        const auto em = selection_ensemble(island, orch.board(), true);
        const auto w = inverse_rmse_weights(em.rmses);
        for (int t = 0; t < 250; ++t) {
            const std::size_t size = 1 + sel_rng.below(50);
            const std::size_t n = 1 + sel_rng.below(size);
            std::vector<Candidate> pool;
            for (std::size_t i = 0; i < size; ++i) {
                if (i > 0 && sel_rng.uniform() < 0.2) pool.push_back(pool[sel_rng.below(i)]);
                else pool.push_back(random_candidate(4, -5, 5, sel_rng));
            }
            std::vector<double> scores;
            for (const auto& cand : pool) {
                double s = 0.0;
                for (std::size_t k = 0; k < em.models.size(); ++k) s += w[k] * predict(*em.models[k], cand);
                scores.push_back(s);
            }
            const auto sel = environmental_selection(pool, em.models, em.rmses, n);
            const auto want = oracle::brute_force_select(scores, n);
            bool same = sel.size() == n;
            for (std::size_t k = 0; same && k < n; ++k) same = sel.members[k] == pool[want[k]];
            c.expect(same, "selection mismatch, union of " + std::to_string(size));
        }
    }

    // Roulette goodness of fit. Several simplices are tested, so the level is
    // split across them (Bonferroni) to keep the family-wise level at 0.01.
    for (std::size_t df = 1; df <= 10; ++df)
        c.expect(std::abs(oracle::chi_square_survival(oracle::chi_square_critical_001(df), df) - 0.01) < 2e-4,
                 "chi-square survival at the tabulated critical value, df " + std::to_string(df));
    RngStream roul(23, "acceptance/roulette");
    std::vector<std::vector<double>> simplices{{0.5, 0.5}, {0.25, 0.25, 0.25, 0.25}, {2.0 / 3, 1.0 / 3}, {0.7, 0.0, 0.3}};
    for (int t = 0; t < 6; ++t) {
        std::vector<double> p(2 + roul.below(8));
        for (auto& x : p) x = roul.uniform(0.05, 1);
        const double s = std::accumulate(p.begin(), p.end(), 0.0);
        for (auto& x : p) x /= s;
        simplices.push_back(p);
    }
    const double level = 0.01 / static_cast<double>(simplices.size());
    double min_p = 1.0;
    for (const auto& p : simplices) {
        std::vector<std::size_t> counts(p.size(), 0);
        for (int i = 0; i < 10000; ++i) counts[roulette_select(p, roul)]++;
        std::size_t df = 0;
        bool zero_hit = false;
        for (std::size_t k = 0; k < p.size(); ++k) {
            if (p[k] > 0) ++df;
            else zero_hit |= counts[k] > 0;
        }
        const double stat = oracle::chi_square_statistic(counts, p);
        const double pval = oracle::chi_square_survival(stat, df - 1);
        min_p = std::min(min_p, pval);
        c.expect(!zero_hit && pval >= level, "chi-square " + fmt(stat) + " p = " + fmt(pval));
    }

    // k-means on 4-point lines. Two tight pairs with a wide gap have a unique
    // Lloyd fixed point, so any seeding must land on the exhaustive optimum.
    RngStream gen(24, "acceptance/lines");
    for (int t = 0; t < 2000; ++t) {
        const double a = gen.uniform(-10, 10), s1 = gen.uniform(0, 2), s2 = gen.uniform(0, 2);
        const double gap = 3 * std::max(s1, s2) + gen.uniform(0.01, 10);
        std::vector<double> p{a, a + s1, a + s1 + gap, a + s1 + gap + s2};
        std::swap(p[gen.below(4)], p[gen.below(4)]);
        RowMatrix pts(4, 1);
        for (int i = 0; i < 4; ++i) pts(i, 0) = p[static_cast<std::size_t>(i)];
        const auto want = oracle::exhaustive_two_means(p);
        RngStream km(static_cast<std::uint64_t>(t), "km");
        const RowMatrix got = kmeans_centers(pts, 2, km);
        c.expect(std::min(got(0, 0), got(1, 0)) == want.first && std::max(got(0, 0), got(1, 0)) == want.second,
                 "k-means centers on line " + std::to_string(t));
    }
    RowMatrix example(4, 1);
    example << 0, 1, 9, 10;
    for (int s = 0; s < 50; ++s) {
        RngStream km(static_cast<std::uint64_t>(s), "km");
        const RowMatrix got = kmeans_centers(example, 2, km);
        c.expect(std::min(got(0, 0), got(1, 0)) == 0.5 && std::max(got(0, 0), got(1, 0)) == 9.5,
                 "k-means on {0,1,9,10}");
    }

    return c.outcome("least squares worst rel err " + fmt(worst_ls) + " (unrefined ridge oracle " + fmt(worst_plain) +
                     "), selection exact, roulette min p " + fmt(min_p) + " vs level " + fmt(level) +
                     " over 10^4 draws each, k-means exact");
}

// ---------------------------------------------------------------- criterion 3

ModelRef lookup_model(const std::vector<double>& xs, const std::vector<double>& ys) {
    auto m = std::make_shared<RbfnModel>();
    m->centers = RowMatrix(static_cast<Eigen::Index>(xs.size()), 1);
    m->weights = Vector(static_cast<Eigen::Index>(xs.size()));
    for (std::size_t i = 0; i < xs.size(); ++i) {
        m->centers(static_cast<Eigen::Index>(i), 0) = xs[i];
        m->weights[static_cast<Eigen::Index>(i)] = ys[i];
    }
    m->sigma = 1e-3;
    return m;
}

Outcome algorithm_traces() {
    Checks c;
    c.expect(!early_stop({5, 4, 4, 4}, 3), "early stop fired at length 4");
    c.expect(early_stop({5, 4, 4, 4, 4}, 3), "early stop did not fire at length 5");

    // 100 residents scored by their coordinate; an immigrant scoring 2.5 arrives third.
    Population pop;
    std::vector<double> xs, ys;
    for (int i = 1; i <= 100; ++i) {
        pop.members.push_back(Candidate{static_cast<double>(i)});
        xs.push_back(i);
        ys.push_back(i);
    }
    xs.push_back(2.5);
    ys.push_back(2.5);
    const auto model = lookup_model(xs, ys);
    const auto rank = arrival_rank(pop, Candidate{2.5}, *model);
    const auto r = rank_effectiveness(pop, Candidate{2.5}, *model);
    c.expect(rank == 3, "arrival rank " + std::to_string(rank));
    c.expect(r == 97, "rank effectiveness " + std::to_string(r));

    std::string epochs;
    for (auto [t_iter, max_iter] : {std::pair<std::size_t, std::size_t>{3, 12}, {4, 20}, {5, 5}, {2, 14}}) {
        RunConfig cfg;
        cfg.islands = 4;
        cfg.population = 8;
        cfg.budget = 40;
        cfg.t_iter = t_iter;
        cfg.max_iter = max_iter;
        cfg.early_stop = false;
        auto p = make_problem("sphere", 5, 0);
        const auto res = run(cfg, p);
        c.expect(res.epochs_executed == max_iter / t_iter && !res.stopped_early,
                 "epochs " + std::to_string(res.epochs_executed) + " for " + std::to_string(max_iter) + "/" +
                     std::to_string(t_iter));
        epochs += (epochs.empty() ? "" : ",") + std::to_string(res.epochs_executed);
    }
    return c.outcome("early stop at length 5, rank " + std::to_string(rank) + " -> r = " + std::to_string(r) +
                     ", epochs " + epochs);
}

// ---------------------------------------------------------------- criterion 4

Outcome determinism() {
    Checks c;
    RunConfig cfg;
    cfg.islands = 9;
    cfg.population = 12;
    cfg.t_iter = 4;
    cfg.max_iter = 20;
    cfg.budget = 90;
    cfg.seed = 17;
    cfg.trace = true;
    for (const char* fn : {"rastrigin", "elliptic", "rot_elliptic"}) {
        auto p1 = make_problem(fn, 10, 3), p2 = make_problem(fn, 10, 3);
        const auto a = to_json(run(cfg, p1), false).dump();
        const auto b = to_json(run(cfg, p2), false).dump();
        c.expect(a == b, std::string("serial JSON differs on ") + fn);
    }

    RunConfig snap;
    snap.islands = 4;
    snap.population = 12;
    snap.t_iter = 5;
    snap.max_iter = 25;
    snap.budget = 60;
    snap.board = BoardMode::Snapshot;
    std::string values;
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        snap.seed = seed;
        snap.scheduler = SchedulerMode::Serial;
        auto p1 = make_problem("rastrigin", 8, 0);
        const auto serial = run(snap, p1);
        auto par = snap;
        par.scheduler = SchedulerMode::Parallel;
        par.threads = 4;
        auto p2 = make_problem("rastrigin", 8, 0);
        const auto parallel = run(par, p2);
        c.expect(serial.best_estimated_fitness == parallel.best_estimated_fitness,
                 "snapshot serial vs parallel differ at seed " + std::to_string(seed));
        values += (values.empty() ? "" : ",") + fmt(serial.best_estimated_fitness);
    }
    return c.outcome("serial JSON byte-identical, snapshot serial == parallel(4) best_estimated [" + values + "]");
}

// ---------------------------------------------------------------- criterion 5

RunConfig desk_config() {
    RunConfig cfg;
    cfg.islands = 9;
    cfg.population = 30;
    cfg.t_iter = 30;
    cfg.max_iter = 300;
    cfg.budget = 300;
    return cfg;
}

Outcome ablation_reproduction() {
    const std::vector<AblationVariant> variants{AblationVariant::Full, AblationVariant::NoF, AblationVariant::Blank};
    bool ordering = true, margin = false;
    std::ostringstream os;
    for (const char* fn : {"rastrigin", "elliptic"}) {
        std::vector<double> med;
        for (auto v : variants) {
            std::vector<double> finals;
            for (std::uint64_t seed = 0; seed < 10; ++seed) {
                auto cfg = apply_variant(desk_config(), v);
                cfg.seed = seed;
                auto p = make_problem(fn, 50, 0);
                finals.push_back(run(cfg, p).final_real_fitness);
            }
            med.push_back(median(finals));
        }
        const bool ok = med[0] <= med[1] && med[0] <= med[2];
        const bool wins = med[2] - med[0] > kBlankMargin * std::abs(med[2]);
        ordering &= ok;
        margin |= wins;
        os << fn << " median full=" << fmt(med[0]) << " nof=" << fmt(med[1]) << " blank=" << fmt(med[2])
           << (ok ? "" : " (ordering violated)") << "; ";
    }
    os << "ordering " << (ordering ? "holds" : "fails") << ", >5% margin over blank "
       << (margin ? "met" : "not met");
    return {ordering && margin ? Status::Pass : Status::Fail, os.str()};
}

// ---------------------------------------------------------------- criterion 6

Outcome speedup() {
    auto cfg = desk_config();
    cfg.islands = 16;
    const auto rows = measure_speedup(cfg, "rastrigin", 50, {4}, 5);
    const double rs = rows.front().median_speedup;
    const unsigned cores = std::thread::hardware_concurrency();
    std::ostringstream os;
    os << "median R_s(4) = " << fmt(rs) << " (serial " << fmt(rows.front().median_serial_ms) << " ms, parallel "
       << fmt(rows.front().median_parallel_ms) << " ms) on " << cores << " hardware threads";
    if (cores < 4) {
        os << "; needs >= 4 cores, not judged";
        return {Status::Skip, os.str()};
    }
    return {rs >= kSpeedupTarget ? Status::Pass : Status::Fail, os.str()};
}

// ---------------------------------------------------------------- criterion 7

// Mean over islands of test RMSE on each island's generation-50 population,
// with and without the pseudo-label refit. True labels come from a separate
// instance so the run's evaluation budget is untouched.
std::pair<double, double> fine_tune_rmse(std::uint64_t seed) {
    RunConfig cfg = desk_config();
    cfg.t_iter = 10;
    cfg.max_iter = 50;
    cfg.early_stop = false;
    cfg.seed = seed;
    auto problem = make_problem("elliptic", 30, 0);
    auto labeler = make_problem("elliptic", 30, 0);
    Orchestrator orch(cfg, problem);
    orch.initialize();
    while (orch.step_epoch()) {
    }
    double with = 0.0, without = 0.0;
    for (const auto& island : orch.islands()) {
        std::vector<LabeledSample> test;
        for (const auto& x : island.population.members) test.push_back({x, labeler.evaluate(x), Provenance::Real});
        auto copy = island;
        const auto tuned = fine_tune_island(copy, orch.board(), cfg.pseudo_count).model;
        const auto plain = refit_weights(*island.model, island.train);
        with += validation_rmse(tuned, test).rmse;
        without += validation_rmse(plain, test).rmse;
    }
    const double t = static_cast<double>(orch.islands().size());
    orch.finish();
    return {with / t, without / t};
}

Outcome fine_tune_efficacy() {
    std::size_t wins = 0;
    std::ostringstream per_seed;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto [with, without] = fine_tune_rmse(seed);
        wins += with <= without;
        per_seed << (seed ? " " : "") << fmt(with / without);
    }
    std::ostringstream os;
    os << "fine-tuned RMSE <= plain in " << wins << "/10 seeds (need " << kFineTuneWins
       << "); ratio per seed: " << per_seed.str();
    return {wins >= kFineTuneWins ? Status::Pass : Status::Fail, os.str()};
}

// ---------------------------------------------------------------- criterion 8

Outcome profile_example() {
    Checks c;
    const auto p = performance_profile({{1, 2}, {2, 1}}, {"a", "b"});
    c.expect(p.taus == std::vector<double>{1, 2}, "tau grid");
    for (std::size_t s = 0; s < 2 && p.rho.size() == 2; ++s) {
        c.expect(p.rho[s].size() == 2 && p.rho[s][0] == 0.5 && p.rho[s][1] == 1.0,
                 "rho for solver " + std::to_string(s));
    }
    const auto explicit_grid = performance_profile({{1, 2}, {2, 1}}, {"a", "b"}, {1.0, 1.5, 2.0});
    c.expect(explicit_grid.rho[0] == std::vector<double>{0.5, 0.5, 1.0}, "explicit tau grid");
    return c.outcome("rho(1) = 0.5, rho(2) = 1.0 for both solvers");
}

const std::vector<std::function<Outcome()>>& criteria() {
    static const std::vector<std::function<Outcome()>> all{invariant_suite, oracle_equivalence, algorithm_traces,
                                                           determinism,     ablation_reproduction, speedup,
                                                           fine_tune_efficacy, profile_example};
    return all;
}

int report(std::size_t n) {
    Outcome out;
    try {
        out = criteria()[n - 1]();
    } catch (const std::exception& e) {
        out = {Status::Fail, std::string("exception: ") + e.what()};
    }
    const char* tag = out.status == Status::Pass ? "PASS" : out.status == Status::Fail ? "FAIL" : "SKIP";
    std::printf("CRITERION %zu %s: %s\n", n, tag, out.detail.c_str());
    std::fflush(stdout);
    return out.status == Status::Pass ? 0 : out.status == Status::Fail ? 1 : 77;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 2) {
        std::fprintf(stderr, "usage: acceptance [criterion 1-8]\n");
        return 2;
    }
    if (argc == 2) {
        const int n = std::atoi(argv[1]);
        if (n < 1 || n > static_cast<int>(criteria().size())) {
            std::fprintf(stderr, "unknown criterion %s\n", argv[1]);
            return 2;
        }
        return report(static_cast<std::size_t>(n));
    }
    int worst = 0;
    for (std::size_t n = 1; n <= criteria().size(); ++n) {
        const int code = report(n);
        if (code == 1 || (code == 77 && worst == 0)) worst = code;
    }
    return worst;
}
