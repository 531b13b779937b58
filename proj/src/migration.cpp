#include "islekit/migration.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace islekit {

std::string to_string(TopologyKind kind) {
    switch (kind) {
    case TopologyKind::Ring: return "ring";
    case TopologyKind::VonNeumann: return "von_neumann";
    case TopologyKind::FullyConnected: return "fully_connected";
    }
    return "unknown";
}

TopologyKind topology_from_string(const std::string& name) {
    if (name == "ring") return TopologyKind::Ring;
    if (name == "von_neumann") return TopologyKind::VonNeumann;
    if (name == "fully_connected") return TopologyKind::FullyConnected;
    throw ConfigError("topology", "unknown topology '" + name + "' (ring, von_neumann, fully_connected)");
}

Topology Topology::ring(std::size_t islands) {
    require(islands >= 1, "topology needs at least one island");
    return Topology(TopologyKind::Ring, islands, 1, islands);
}

Topology Topology::von_neumann(std::size_t rows, std::size_t cols) {
    require(rows >= 1 && cols >= 1, "von Neumann grid needs positive rows and cols");
    return Topology(TopologyKind::VonNeumann, rows * cols, rows, cols);
}

Topology Topology::fully_connected(std::size_t islands) {
    require(islands >= 1, "topology needs at least one island");
    return Topology(TopologyKind::FullyConnected, islands, 1, islands);
}

std::vector<std::size_t> Topology::neighbors(std::size_t island) const {
    require(island < islands_, "neighbors: invalid island id");
    std::vector<std::size_t> out;
    switch (kind_) {
    case TopologyKind::Ring:
        out = {(island + islands_ - 1) % islands_, (island + 1) % islands_};
        break;
    case TopologyKind::VonNeumann: {
        const std::size_t r = island / cols_;
        const std::size_t c = island % cols_;
        out = {((r + rows_ - 1) % rows_) * cols_ + c, ((r + 1) % rows_) * cols_ + c,
               r * cols_ + (c + cols_ - 1) % cols_, r * cols_ + (c + 1) % cols_};
        break;
    }
    case TopologyKind::FullyConnected:
        for (std::size_t o = 0; o < islands_; ++o) out.push_back(o);
        break;
    }
    std::erase(out, island);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::size_t> neighbors(const Topology& topology, std::size_t island) {
    return topology.neighbors(island);
}

std::size_t MigrationRecord::rank_sum() const {
    return std::accumulate(effectiveness.begin(), effectiveness.end(), std::size_t{0});
}

namespace {

Vector predict_members(const RbfnModel& model, const Population& pop) { return predict(model, stack(pop.members)); }

std::size_t rank_against(const Vector& resident_predictions, double immigrant_prediction) {
    std::size_t ahead = 0;
    for (Eigen::Index j = 0; j < resident_predictions.size(); ++j)
        if (resident_predictions[j] <= immigrant_prediction) ++ahead;
    return ahead + 1;
}

std::size_t effectiveness_of(std::size_t rank, std::size_t n) { return rank < n ? n - rank : 0; }

}  // namespace

std::size_t arrival_rank(const Population& target_pop, const Candidate& immigrant, const RbfnModel& target_model) {
    require(target_pop.size() > 0, "arrival_rank: empty target population");
    return rank_against(predict_members(target_model, target_pop), predict(target_model, immigrant));
}

std::size_t rank_effectiveness(const Population& target_pop, const Candidate& immigrant,
                               const RbfnModel& target_model) {
    return effectiveness_of(arrival_rank(target_pop, immigrant, target_model), target_pop.size());
}

std::map<std::size_t, double> rank_share(std::span<const MigrationRecord> records) {
    std::map<std::size_t, double> sums;
    double total = 0.0;
    for (const auto& rec : records) {
        const auto s = static_cast<double>(rec.rank_sum());
        sums[rec.source] += s;
        total += s;
    }
    for (auto& [source, value] : sums) value = total > 0.0 ? value / total : 1.0 / static_cast<double>(sums.size());
    return sums;
}

double population_improvement(double pre_mean, const Population& post_pop, const RbfnModel& target_model) {
    require(post_pop.size() > 0, "population_improvement: empty population");
    return pre_mean - predict_members(target_model, post_pop).mean();
}

double differential_factor(const Population& source_pop, const RbfnModel& source_model,
                           const RbfnModel& target_model) {
    require(source_pop.size() > 0, "differential_factor: empty population");
    const RowMatrix x = stack(source_pop.members);
    return (predict(target_model, x) - predict(source_model, x)).cwiseAbs().mean();
}

std::vector<double> min_max_normalize(std::span<const double> values) {
    std::vector<double> out(values.size(), 1.0);
    if (values.size() < 2) return out;
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double range = *hi - *lo;
    if (!(range > 0.0)) return out;
    for (std::size_t k = 0; k < values.size(); ++k) out[k] = (values[k] - *lo) / range;
    return out;
}

EdgeState update_attractiveness(EdgeState edge, double theta_norm, double phi, double rho) {
    require(rho > 0.0 && rho < 1.0, "update_attractiveness: rho must lie in (0, 1)");
    require(theta_norm >= 0.0 && theta_norm <= 1.0 && phi >= 0.0 && phi <= 1.0,
            "update_attractiveness: theta and phi must lie in [0, 1]");
    edge.tau = (1.0 - rho) * edge.tau + theta_norm * phi;
    return edge;
}

std::vector<EdgeState> migration_probabilities(std::vector<EdgeState> edges) {
    require(!edges.empty(), "migration_probabilities: no out-edges");
    double total = 0.0;
    for (const auto& e : edges) total += e.tau * e.v;
    for (auto& e : edges)
        e.mp = total > 0.0 ? e.tau * e.v / total : 1.0 / static_cast<double>(edges.size());
    return edges;
}

std::size_t roulette_select(std::span<const double> probs, RngStream& rng) {
    require(!probs.empty(), "roulette_select: empty probability vector");
    double total = 0.0;
    for (double p : probs) {
        require(std::isfinite(p) && p >= 0.0, "roulette_select: probabilities must be non-negative");
        total += p;
    }
    require(std::abs(total - 1.0) <= 1e-9, "roulette_select: probabilities must sum to 1");
    const double r = rng.uniform() * total;
    double cumulative = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        if (probs[k] <= 0.0) continue;
        cumulative += probs[k];
        last_positive = k;
        if (r < cumulative) return k;
    }
    return last_positive;
}

MigrationLedger::MigrationLedger(const Topology& topology) : edges_(topology.size()) {
    for (std::size_t i = 0; i < topology.size(); ++i) {
        for (std::size_t o : topology.neighbors(i)) edges_[i].push_back({o, 1.0, 1.0, 0.0});
        if (!edges_[i].empty()) edges_[i] = migration_probabilities(std::move(edges_[i]));
    }
}

const EdgeState& MigrationLedger::edge(std::size_t source, std::size_t target) const {
    for (const auto& e : edges_.at(source))
        if (e.target == target) return e;
    throw ContractViolation("ledger: no edge " + std::to_string(source) + "->" + std::to_string(target));
}

std::vector<double> MigrationLedger::probabilities(std::size_t source) const {
    std::vector<double> p;
    for (const auto& e : edges_.at(source)) p.push_back(e.mp);
    return p;
}

void update_attractiveness_from_effects(MigrationLedger& ledger, const std::vector<IslandState>& islands,
                                        const MigrationPolicy& policy) {
    ledger.last_theta_raw.clear();
    if (!policy.attractiveness) {
        for (std::size_t i = 0; i < ledger.islands(); ++i)
            for (auto& e : ledger.out_edges(i)) e.tau = 1.0;
        ledger.pending.clear();
        return;
    }
    if (ledger.pending.empty()) return;

    std::map<std::size_t, std::vector<MigrationRecord>> by_target;
    for (auto& rec : ledger.pending) by_target[rec.target].push_back(rec);

    std::vector<std::size_t> targets;
    std::vector<double> raw;
    for (const auto& [o, recs] : by_target) {
        const auto& island = islands.at(o);
        targets.push_back(o);
        raw.push_back(population_improvement(recs.front().pre_migration_mean, island.population, *island.model));
        ledger.last_theta_raw[o] = raw.back();
    }
    const auto theta = min_max_normalize(raw);

    // (theta_o, phi_io) per edge that carried migrants; other edges only decay.
    std::map<std::pair<std::size_t, std::size_t>, std::pair<double, double>> effect;
    for (std::size_t t = 0; t < targets.size(); ++t) {
        const auto& recs = by_target[targets[t]];
        for (const auto& [source, phi] : rank_share(recs)) effect[{source, targets[t]}] = {theta[t], phi};
    }
    for (std::size_t i = 0; i < ledger.islands(); ++i) {
        for (auto& e : ledger.out_edges(i)) {
            const auto it = effect.find({i, e.target});
            const auto [th, phi] = it == effect.end() ? std::pair{0.0, 0.0} : it->second;
            e = update_attractiveness(e, th, phi, policy.rho);
        }
    }
    ledger.pending.clear();
}

void update_differential_factors(MigrationLedger& ledger, const std::vector<IslandState>& islands,
                                 const MigrationPolicy& policy) {
    if (!policy.differential) {
        for (std::size_t i = 0; i < ledger.islands(); ++i)
            for (auto& e : ledger.out_edges(i)) e.v = 1.0;
        return;
    }
    std::vector<double> raw;
    for (std::size_t i = 0; i < ledger.islands(); ++i)
        for (const auto& e : ledger.out_edges(i))
            raw.push_back(differential_factor(islands[i].population, *islands[i].model, *islands[e.target].model));
    const auto norm = min_max_normalize(raw);
    std::size_t k = 0;
    for (std::size_t i = 0; i < ledger.islands(); ++i)
        for (auto& e : ledger.out_edges(i)) e.v = norm[k++];
}

void refresh_probabilities(MigrationLedger& ledger) {
    for (std::size_t i = 0; i < ledger.islands(); ++i) {
        auto& edges = ledger.out_edges(i);
        if (!edges.empty()) edges = migration_probabilities(std::move(edges));
    }
}

std::vector<MigrationRecord> perform_migration(std::vector<IslandState>& islands, const MigrationLedger& ledger,
                                               double fraction, RngStream& rng) {
    require(fraction >= 0.0 && fraction <= 1.0, "perform_migration: fraction must lie in [0, 1]");
    const std::size_t t = islands.size();
    require(ledger.islands() == t, "perform_migration: ledger/island count mismatch");

    // Residents are ranked and averaged before anything arrives.
    std::vector<Vector> resident_predictions(t);
    std::vector<double> pre_mean(t);
    for (std::size_t o = 0; o < t; ++o) {
        resident_predictions[o] = predict_members(*islands[o].model, islands[o].population);
        pre_mean[o] = resident_predictions[o].mean();
    }

    std::map<std::pair<std::size_t, std::size_t>, MigrationRecord> records;
    for (std::size_t s = 0; s < t; ++s) {
        const auto& edges = ledger.out_edges(s);
        if (edges.empty()) continue;
        const auto probs = ledger.probabilities(s);
        const std::size_t n = islands[s].population.size();
        const auto count = std::min(n, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9)));
        for (std::size_t idx : rng.sample_without_replacement(n, count)) {
            const std::size_t o = edges[roulette_select(probs, rng)].target;
            const Candidate& migrant = islands[s].population.members[idx];
            const std::size_t rank =
                rank_against(resident_predictions[o], predict(*islands[o].model, migrant));
            auto& rec = records[{s, o}];
            rec.source = s;
            rec.target = o;
            rec.pre_migration_mean = pre_mean[o];
            rec.migrants.push_back(migrant);
            rec.ranks_at_arrival.push_back(rank);
            rec.effectiveness.push_back(effectiveness_of(rank, static_cast<std::size_t>(resident_predictions[o].size())));
        }
    }

    std::vector<MigrationRecord> out;
    out.reserve(records.size());
    for (auto& [key, rec] : records) out.push_back(std::move(rec));
    for (const auto& rec : out) {
        auto& pop = islands[rec.target].population;
        pop.members.insert(pop.members.end(), rec.migrants.begin(), rec.migrants.end());
        pop.scores.reset();
    }
    return out;
}

}  // namespace islekit
