#pragma once

// Island topologies and adaptive migration: rank effectiveness, population
// improvement, attractiveness decay, differential factor, migration
// probabilities and roulette routing.

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "islekit/island.hpp"

namespace islekit {

enum class TopologyKind { Ring, VonNeumann, FullyConnected };

std::string to_string(TopologyKind kind);
TopologyKind topology_from_string(const std::string& name);

class Topology {
public:
    static Topology ring(std::size_t islands);
    /// Toroidal rows x cols grid.
    static Topology von_neumann(std::size_t rows, std::size_t cols);
    static Topology fully_connected(std::size_t islands);

    TopologyKind kind() const noexcept { return kind_; }
    std::size_t size() const noexcept { return islands_; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    /// Distinct neighbors in ascending order. Grids or rings too small to have
    /// distinct wraparound neighbors report fewer than the nominal degree.
    std::vector<std::size_t> neighbors(std::size_t island) const;

private:
    Topology(TopologyKind kind, std::size_t islands, std::size_t rows, std::size_t cols)
        : kind_(kind), islands_(islands), rows_(rows), cols_(cols) {}

    TopologyKind kind_;
    std::size_t islands_;
    std::size_t rows_;
    std::size_t cols_;
};

std::vector<std::size_t> neighbors(const Topology& topology, std::size_t island);

struct EdgeState {
    std::size_t target = 0;
    double tau = 1.0;
    double v = 1.0;
    double mp = 0.0;
};

struct MigrationRecord {
    std::size_t source = 0;
    std::size_t target = 0;
    std::vector<Candidate> migrants;
    std::vector<std::size_t> ranks_at_arrival;
    std::vector<std::size_t> effectiveness;  // r = n - rank, clamped at 0
    double pre_migration_mean = 0.0;         // target mean prediction before arrivals

    std::size_t rank_sum() const;
};

/// 1-based rank of the immigrant among residents plus itself under the target
/// model. Residents predicted equal to the immigrant rank ahead of it.
std::size_t arrival_rank(const Population& target_pop, const Candidate& immigrant, const RbfnModel& target_model);

/// r = n - rank, clamped at 0, with n the resident count.
std::size_t rank_effectiveness(const Population& target_pop, const Candidate& immigrant,
                               const RbfnModel& target_model);

/// Share of the rank sum received by target o that each source contributed.
std::map<std::size_t, double> rank_share(std::span<const MigrationRecord> records);

/// Raw improvement: pre-migration mean minus the current mean prediction.
double population_improvement(double pre_mean, const Population& post_pop, const RbfnModel& target_model);

/// Mean absolute disagreement of source and target models over the source population.
double differential_factor(const Population& source_pop, const RbfnModel& source_model,
                           const RbfnModel& target_model);

/// Min-max scaling to [0, 1]; a single value or zero range maps everything to 1.
std::vector<double> min_max_normalize(std::span<const double> values);

EdgeState update_attractiveness(EdgeState edge, double theta_norm, double phi, double rho);

/// MP_io = tau_io v_io / sum_k tau_ik v_ik, uniform when the sum is zero.
std::vector<EdgeState> migration_probabilities(std::vector<EdgeState> edges);

std::size_t roulette_select(std::span<const double> probs, RngStream& rng);

/// Directed-edge state for every island plus the records of the last migration,
/// which are consumed when their effect is measured.
class MigrationLedger {
public:
    explicit MigrationLedger(const Topology& topology);

    std::size_t islands() const noexcept { return edges_.size(); }
    std::vector<EdgeState>& out_edges(std::size_t source) { return edges_.at(source); }
    const std::vector<EdgeState>& out_edges(std::size_t source) const { return edges_.at(source); }
    const EdgeState& edge(std::size_t source, std::size_t target) const;
    std::vector<double> probabilities(std::size_t source) const;

    std::vector<MigrationRecord> pending;
    /// Raw improvement per target from the last effect measurement (for logs).
    std::map<std::size_t, double> last_theta_raw;

private:
    std::vector<std::vector<EdgeState>> edges_;
};

struct MigrationPolicy {
    double fraction = 0.1;
    double rho = 0.1;
    bool attractiveness = true;  // false pins tau to 1
    bool differential = true;    // false pins v to 1
};

/// Applies the effect of `ledger.pending` (population improvement x rank share)
/// to every edge's attractiveness, then clears the pending records.
void update_attractiveness_from_effects(MigrationLedger& ledger, const std::vector<IslandState>& islands,
                                        const MigrationPolicy& policy);

/// Recomputes normalized differential factors for every directed edge.
void update_differential_factors(MigrationLedger& ledger, const std::vector<IslandState>& islands,
                                 const MigrationPolicy& policy);

void refresh_probabilities(MigrationLedger& ledger);

/// Each source copies ceil(fraction * n) uniformly chosen members to
/// roulette-chosen neighbors. Targets grow until their next selection.
std::vector<MigrationRecord> perform_migration(std::vector<IslandState>& islands, const MigrationLedger& ledger,
                                               double fraction, RngStream& rng);

}  // namespace islekit
