#include "islekit/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "islekit/semi_supervised.hpp"

namespace islekit {

void EvolutionParams::validate() const {
    require(eta_c > 0.0 && eta_m > 0.0, "distribution indices must be positive");
    require(p_cross >= 0.0 && p_cross <= 1.0, "p_cross must lie in [0, 1]");
    require(p_mut >= 0.0 && p_mut <= 1.0, "p_mut must lie in [0, 1]");
}

double sbx_beta(double u, double eta_c) {
    const double expo = 1.0 / (eta_c + 1.0);
    if (u <= 0.5) return std::pow(2.0 * u, expo);
    return std::pow(1.0 / (2.0 * (1.0 - u)), expo);
}

std::pair<Candidate, Candidate> sbx_crossover(const Candidate& p1, const Candidate& p2, const EvolutionParams& params,
                                              RngStream& rng, const Bounds& bounds) {
    require(p1.dim() == p2.dim() && p1.dim() == bounds.dim(), "sbx_crossover: dimension mismatch");
    Candidate c1 = p1;
    Candidate c2 = p2;
    if (rng.uniform() >= params.p_cross) return {clamp(c1, bounds), clamp(c2, bounds)};
    for (Eigen::Index j = 0; j < p1.genes.size(); ++j) {
        if (rng.uniform() >= 0.5) continue;
        const double beta = sbx_beta(rng.uniform(), params.eta_c);
        const double a = p1.genes[j];
        const double b = p2.genes[j];
        c1.genes[j] = 0.5 * ((1.0 + beta) * a + (1.0 - beta) * b);
        c2.genes[j] = 0.5 * ((1.0 - beta) * a + (1.0 + beta) * b);
    }
    return {clamp(c1, bounds), clamp(c2, bounds)};
}

double polynomial_mutate_gene(double x, double lower, double upper, double u, double eta_m) {
    const double width = upper - lower;
    const double expo = 1.0 / (eta_m + 1.0);
    double deltaq;
    if (u < 0.5) {
        const double xy = 1.0 - (x - lower) / width;
        const double val = 2.0 * u + (1.0 - 2.0 * u) * std::pow(xy, eta_m + 1.0);
        deltaq = std::pow(val, expo) - 1.0;
    } else {
        const double xy = 1.0 - (upper - x) / width;
        const double val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(xy, eta_m + 1.0);
        deltaq = 1.0 - std::pow(val, expo);
    }
    return std::clamp(x + deltaq * width, lower, upper);
}

Candidate polynomial_mutation(const Candidate& x, const EvolutionParams& params, RngStream& rng,
                              const Bounds& bounds) {
    require(x.dim() == bounds.dim(), "polynomial_mutation: dimension mismatch");
    Candidate out = x;
    for (Eigen::Index j = 0; j < x.genes.size(); ++j) {
        if (rng.uniform() >= params.p_mut) continue;
        out.genes[j] = polynomial_mutate_gene(x.genes[j], bounds.lower()[j], bounds.upper()[j], rng.uniform(),
                                              params.eta_m);
    }
    return out;
}

std::vector<Candidate> generate_offspring(const Population& pop, const EvolutionParams& params, RngStream& rng,
                                          const Bounds& bounds) {
    const std::size_t m = pop.size();
    std::vector<Candidate> offspring;
    offspring.reserve(m);
    const auto order = rng.permutation(m);
    for (std::size_t k = 0; k + 1 < m; k += 2) {
        auto [c1, c2] = sbx_crossover(pop.members[order[k]], pop.members[order[k + 1]], params, rng, bounds);
        offspring.push_back(polynomial_mutation(c1, params, rng, bounds));
        offspring.push_back(polynomial_mutation(c2, params, rng, bounds));
    }
    if (m % 2 == 1) {
        std::size_t best = 0;
        if (pop.scores && pop.scores->size() == m)
            best = static_cast<std::size_t>(std::min_element(pop.scores->begin(), pop.scores->end()) -
                                            pop.scores->begin());
        offspring.push_back(polynomial_mutation(pop.members[best], params, rng, bounds));
    }
    return offspring;
}

Population environmental_selection(const std::vector<Candidate>& pool, std::span<const ModelRef> models,
                                   std::span<const double> rmses, std::size_t n) {
    require(pool.size() >= n, "environmental_selection: pool smaller than n");
    require(models.size() == rmses.size(), "environmental_selection: models/rmses length mismatch");
    const auto weights = inverse_rmse_weights(rmses);
    const Vector scores = weighted_prediction(models, weights, stack(pool));

    std::vector<std::size_t> order(pool.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[static_cast<Eigen::Index>(a)] < scores[static_cast<Eigen::Index>(b)];
    });

    Population next;
    next.members.reserve(n);
    std::vector<double> kept;
    kept.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        next.members.push_back(pool[order[k]]);
        kept.push_back(scores[static_cast<Eigen::Index>(order[k])]);
    }
    next.scores = std::move(kept);
    return next;
}

SelectionEnsemble selection_ensemble(const IslandState& island, const SharedBoard& board, bool with_neighbors) {
    SelectionEnsemble em;
    if (with_neighbors) {
        for (std::size_t o : island.neighbors) {
            auto entry = board.require_entry(o);
            em.models.push_back(std::move(entry.model));
            em.rmses.push_back(entry.rmse.rmse);
        }
    }
    em.models.push_back(island.model);
    em.rmses.push_back(island.rmse.rmse);
    return em;
}

void refresh_elite(IslandState& island, const SharedBoard& board, const IslandSettings& settings) {
    const auto em = selection_ensemble(island, board, settings.neighbor_ensemble);
    const auto& members = island.population.members;
    require(!members.empty(), "refresh_elite: empty population");
    const auto weights = inverse_rmse_weights(em.rmses);
    const Vector scores = weighted_prediction(em.models, weights, stack(members));
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < scores.size(); ++j)
        if (scores[j] < scores[best]) best = j;
    island.elite = members[static_cast<std::size_t>(best)];
    island.elite_score = scores[best];
}

IterationTrace intra_island_iteration(IslandState& island, SharedBoard& board, const IslandSettings& settings) {
    if (settings.fine_tune) {
        const std::size_t l =
            island.neighbors.empty() ? 0 : std::min(settings.pseudo_count, island.population.size());
        auto tuned = fine_tune_island(island, board, l);
        island.model = std::make_shared<const RbfnModel>(std::move(tuned.model));
        island.rmse = tuned.score;
        board.publish(island.id, {island.model, island.rmse});
    }

    auto offspring = generate_offspring(island.population, settings.params, island.rng, settings.bounds);
    std::vector<Candidate> pool = std::move(island.population.members);
    pool.insert(pool.end(), std::make_move_iterator(offspring.begin()), std::make_move_iterator(offspring.end()));

    const auto em = selection_ensemble(island, board, settings.neighbor_ensemble);
    island.population = environmental_selection(pool, em.models, em.rmses, settings.population_size);
    island.elite = island.population.members.front();
    island.elite_score = island.population.scores->front();

    const auto& scores = *island.population.scores;
    const double mean = std::accumulate(scores.begin(), scores.end(), 0.0) / static_cast<double>(scores.size());
    return {island.id, ++island.iterations, island.elite_score, mean, island.rmse.rmse};
}

void intra_island_epoch(IslandState& island, SharedBoard& board, std::size_t t_iter, const IslandSettings& settings,
                        const std::function<void(const IterationTrace&)>& on_iteration) {
    if (t_iter == 0) {
        refresh_elite(island, board, settings);
        return;
    }
    for (std::size_t it = 0; it < t_iter; ++it) {
        const auto trace = intra_island_iteration(island, board, settings);
        if (on_iteration) on_iteration(trace);
    }
}

}  // namespace islekit
