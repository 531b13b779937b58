#pragma once

// Real-coded variation (SBX, bounded polynomial mutation), ensemble-scored
// truncation selection, and the per-island optimization loop.

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "islekit/island.hpp"

namespace islekit {

struct EvolutionParams {
    double eta_c = 15.0;
    double eta_m = 15.0;
    double p_cross = 1.0;
    double p_mut = 0.0;  // per gene; callers usually set 1/d

    static EvolutionParams defaults_for(std::size_t d) {
        EvolutionParams p;
        p.p_mut = 1.0 / static_cast<double>(d);
        return p;
    }
    void validate() const;
};

/// SBX spread factor for a uniform draw u.
double sbx_beta(double u, double eta_c);

/// Per-gene SBX with probability 0.5; the whole pair is copied unchanged with
/// probability 1 - p_cross. Children are clamped to the bounds.
std::pair<Candidate, Candidate> sbx_crossover(const Candidate& p1, const Candidate& p2, const EvolutionParams& params,
                                              RngStream& rng, const Bounds& bounds);

/// Bounded polynomial mutation of one gene for a uniform draw u.
double polynomial_mutate_gene(double x, double lower, double upper, double u, double eta_m);

Candidate polynomial_mutation(const Candidate& x, const EvolutionParams& params, RngStream& rng,
                              const Bounds& bounds);

/// Random pairing without replacement, SBX then PM on every child. Returns as
/// many offspring as there are members; an odd member count is padded with a
/// mutated copy of the best member.
std::vector<Candidate> generate_offspring(const Population& pop, const EvolutionParams& params, RngStream& rng,
                                          const Bounds& bounds);

/// Scores the union with the inverse-RMSE ensemble and keeps the n best
/// (ascending score, index tiebreak). Scores are stored on the result.
Population environmental_selection(const std::vector<Candidate>& pool, std::span<const ModelRef> models,
                                   std::span<const double> rmses, std::size_t n);

/// Settings an island needs for one intra-island iteration.
struct IslandSettings {
    Bounds bounds;
    EvolutionParams params;
    std::size_t population_size = 100;
    std::size_t pseudo_count = 3;
    bool fine_tune = true;
    /// When false, selection uses only the island's own model.
    bool neighbor_ensemble = true;
};

struct IterationTrace {
    std::size_t island;
    std::size_t iter;
    double best_score;
    double mean_score;
    double rmse;
};

/// The selection ensemble EM = neighbor models plus the island's own model.
struct SelectionEnsemble {
    std::vector<ModelRef> models;
    std::vector<double> rmses;
};
SelectionEnsemble selection_ensemble(const IslandState& island, const SharedBoard& board, bool with_neighbors);

/// Scores the current population with the selection ensemble and sets the elite.
void refresh_elite(IslandState& island, const SharedBoard& board, const IslandSettings& settings);

/// One pass of: fine-tune, publish, offspring, union, selection, elite.
IterationTrace intra_island_iteration(IslandState& island, SharedBoard& board, const IslandSettings& settings);

/// t_iter consecutive iterations. With t_iter = 0 the population is kept and the
/// elite is re-derived under the current ensemble.
void intra_island_epoch(IslandState& island, SharedBoard& board, std::size_t t_iter, const IslandSettings& settings,
                        const std::function<void(const IterationTrace&)>& on_iteration = {});

}  // namespace islekit
