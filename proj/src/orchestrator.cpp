#include "islekit/orchestrator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "islekit/semi_supervised.hpp"

namespace islekit {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

std::size_t integer_sqrt(std::size_t n) {
    auto r = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

const RunConfig& validated(const RunConfig& config) {
    config.validate();
    return config;
}

const char* scheduler_name(SchedulerMode mode) { return mode == SchedulerMode::Serial ? "serial" : "parallel"; }
const char* board_name(BoardMode mode) { return mode == BoardMode::Live ? "live" : "snapshot"; }

}  // namespace

void RunConfig::validate() const {
    if (islands < 2) throw ConfigError("T", "need at least 2 islands");
    if (population < 2) throw ConfigError("n", "population size must be at least 2");
    if (t_iter < 1) throw ConfigError("t_iter", "migration gap must be at least 1");
    if (max_iter < t_iter || max_iter % t_iter != 0)
        throw ConfigError("max_iter", "max_iter (" + std::to_string(max_iter) + ") must be a positive multiple of t_iter (" +
                                          std::to_string(t_iter) + ")");
    if (topology == TopologyKind::VonNeumann) {
        const auto side = integer_sqrt(islands);
        if (side * side != islands)
            throw ConfigError("T", "von_neumann topology needs a square island count, got " + std::to_string(islands));
    }
    if (!(rho > 0.0 && rho < 1.0)) throw ConfigError("rho", "decay factor must lie in (0, 1)");
    if (pseudo_count > population) throw ConfigError("l", "pseudo-label count cannot exceed the population size");
    if (!(migrants_fraction >= 0.0 && migrants_fraction <= 1.0))
        throw ConfigError("migrants_fraction", "must lie in [0, 1]");
    if (!(eta_c > 0.0)) throw ConfigError("eta_c", "must be positive");
    if (!(eta_m > 0.0)) throw ConfigError("eta_m", "must be positive");
    if (!(p_cross >= 0.0 && p_cross <= 1.0)) throw ConfigError("p_cross", "must lie in [0, 1]");
    if (p_mut && !(*p_mut >= 0.0 && *p_mut <= 1.0)) throw ConfigError("p_mut", "must lie in [0, 1]");
    if (budget < 3) throw ConfigError("budget", "need at least 3 real evaluations for the offline data");
    if (threads < 1) throw ConfigError("threads", "must be at least 1");
}

nlohmann::json to_json(const RunConfig& c) {
    nlohmann::json j = {
        {"T", c.islands},
        {"n", c.population},
        {"t_iter", c.t_iter},
        {"max_iter", c.max_iter},
        {"es", c.es},
        {"early_stop", c.early_stop},
        {"rho", c.rho},
        {"l", c.pseudo_count},
        {"migrants_fraction", c.migrants_fraction},
        {"topology", to_string(c.topology)},
        {"eta_c", c.eta_c},
        {"eta_m", c.eta_m},
        {"p_cross", c.p_cross},
        {"p_mut", c.p_mut ? nlohmann::json(*c.p_mut) : nlohmann::json(nullptr)},
        {"budget", c.budget},
        {"seed", c.seed},
        {"variant", c.variant},
        {"ablation",
         {{"diverse_data", c.ablation.diverse_data},
          {"fine_tune", c.ablation.fine_tune},
          {"migration", c.ablation.migration},
          {"attractiveness", c.ablation.attractiveness},
          {"differential", c.ablation.differential}}},
        {"scheduler", scheduler_name(c.scheduler)},
        {"threads", c.threads},
        {"board", board_name(c.board)},
        {"sigma_rule", to_string(c.sigma_rule)},
    };
    return j;
}

Topology make_topology(const RunConfig& config) {
    switch (config.topology) {
    case TopologyKind::Ring: return Topology::ring(config.islands);
    case TopologyKind::FullyConnected: return Topology::fully_connected(config.islands);
    case TopologyKind::VonNeumann: {
        const auto side = integer_sqrt(config.islands);
        return Topology::von_neumann(side, config.islands / side);
    }
    }
    throw ConfigError("topology", "unknown topology");
}

nlohmann::json to_json(const RunResult& r, bool include_timing) {
    nlohmann::json per_epoch = nlohmann::json::array();
    for (const auto& e : r.elite_history) {
        nlohmann::json row = {{"global_fitness", e.global_fitness},
                              {"elite_island", e.elite_island},
                              {"per_island_elite_fitness", e.per_island_elite_fitness}};
        if (include_timing) row["wall_ms"] = e.wall_ms;
        per_epoch.push_back(std::move(row));
    }
    nlohmann::json j = {
        {"config_echo", to_json(r.config)},
        {"problem", r.problem},
        {"dim", r.dim},
        {"best_estimated_fitness", r.best_estimated_fitness},
        {"final_real_fitness", r.final_real_fitness},
        {"last_elite_fitness", r.last_elite_fitness},
        {"best_candidate", std::vector<double>(r.best_candidate.genes.begin(), r.best_candidate.genes.end())},
        {"epochs", r.epochs_executed},
        {"stopped_early", r.stopped_early},
        {"real_evaluations", r.real_evaluations},
        {"per_epoch", per_epoch},
    };
    if (include_timing)
        j["wall_ms"] = {{"init", r.times.init_ms},
                        {"intra", r.times.intra_ms},
                        {"migration", r.times.migration_ms},
                        {"total", r.times.total_ms}};
    return j;
}

EnsembleWeights global_weights(const SharedBoard& board) {
    std::vector<double> rmses;
    rmses.reserve(board.size());
    for (std::size_t i = 0; i < board.size(); ++i) {
        const auto entry = board.read(i);
        if (!entry) throw BoardStale("global surrogate: island " + std::to_string(i) + " never published");
        rmses.push_back(entry->rmse.rmse);
    }
    return inverse_rmse_weights(rmses);
}

GlobalElite global_elite(const std::vector<Candidate>& elites, const SharedBoard& board) {
    require(elites.size() == board.size(), "global_elite: one elite per island required");
    const auto weights = global_weights(board);
    std::vector<ModelRef> models;
    for (const auto& entry : board.read_all()) models.push_back(entry.model);
    const Vector scores = weighted_prediction(models, weights, stack(elites));

    GlobalElite out;
    out.scores.assign(scores.begin(), scores.end());
    std::size_t best = 0;
    for (std::size_t i = 1; i < elites.size(); ++i)
        if (out.scores[i] < out.scores[best]) best = i;
    out.island = best;
    out.candidate = elites[best];
    out.score = out.scores[best];
    return out;
}

bool early_stop(const std::vector<double>& fitness_history, std::size_t es) {
    require(!fitness_history.empty(), "early_stop: empty history");
    const auto first_min = static_cast<std::size_t>(
        std::min_element(fitness_history.begin(), fitness_history.end()) - fitness_history.begin());
    return es < fitness_history.size() && first_min < fitness_history.size() - es;
}

Orchestrator::Orchestrator(RunConfig config, BenchmarkProblem& problem)
    : config_(validated(config)),
      problem_(problem),
      root_(config_.seed, "run"),
      topology_(make_topology(config_)) {
    const auto d = problem_.dim();
    IslandSettings s{problem_.bounds(), {}, config_.population, config_.pseudo_count, config_.ablation.fine_tune,
                     config_.ablation.fine_tune};
    s.params.eta_c = config_.eta_c;
    s.params.eta_m = config_.eta_m;
    s.params.p_cross = config_.p_cross;
    s.params.p_mut = config_.p_mut.value_or(1.0 / static_cast<double>(d));
    settings_ = std::move(s);
    if (config_.scheduler == SchedulerMode::Parallel) pool_ = std::make_unique<WorkerPool>(config_.threads);
}

Orchestrator::~Orchestrator() {
    // Never leave the caller's problem capped at the optimization-phase limit.
    if (initialized_ && !done_) problem_.set_fe_limit(original_limit_);
}

template <class Fn>
void Orchestrator::for_each_island(Fn&& fn) {
    if (pool_) {
        const std::function<void(std::size_t)> task = [&](std::size_t i) { fn(i); };
        pool_->run_batch(islands_.size(), task);
    } else {
        for (std::size_t i = 0; i < islands_.size(); ++i) fn(i);
    }
}

void Orchestrator::initialize() {
    require(!initialized_, "orchestrator already initialized");
    const auto start = Clock::now();
    fe_start_ = problem_.fe_count();
    RngStream data_rng = root_.derive("dataset");
    dataset_ = build_offline_dataset(problem_, config_.budget, data_rng);
    times_.init_ms += elapsed_ms(start);
    build_islands();
}

void Orchestrator::initialize(OfflineDataset dataset) {
    require(!initialized_, "orchestrator already initialized");
    if (dataset.size() < 3) throw InsufficientData("cached dataset needs at least 3 samples");
    fe_start_ = problem_.fe_count();
    dataset_ = std::move(dataset);
    build_islands();
}

void Orchestrator::build_islands() {
    const auto start = Clock::now();
    // No real evaluations are allowed until the final assessment.
    original_limit_ = problem_.fe_limit();
    problem_.set_fe_limit(problem_.fe_count());
    initialized_ = true;

    const std::size_t t = config_.islands;
    board_ = std::make_unique<SharedBoard>(t, config_.board);
    islands_.assign(t, IslandState{});
    traces_.assign(t, {});

    std::optional<IslandDataSplit> shared;
    if (!config_.ablation.diverse_data) {
        RngStream split_rng = root_.derive("shared/split");
        shared = partition_island_data(dataset_, split_rng);
    }

    for_each_island([&](std::size_t i) {
        auto& island = islands_[i];
        const std::string prefix = "island/" + std::to_string(i);
        island.id = i;
        island.neighbors = topology_.neighbors(i);
        RngStream train_rng = root_.derive(prefix + "/train");
        if (shared) {
            island.train = dataset_.samples;
            island.validation = shared->validation;
            train_rng = root_.derive("shared/train");
        } else {
            RngStream split_rng = root_.derive(prefix + "/split");
            auto split = partition_island_data(dataset_, split_rng);
            island.train = std::move(split.train);
            island.validation = std::move(split.validation);
        }
        RngStream pop_rng = root_.derive(prefix + "/population");
        island.population.members = latin_hypercube(config_.population, problem_.bounds(), pop_rng);
        island.model = std::make_shared<const RbfnModel>(
            train_rbfn(island.train, default_center_count(island.train.size()), train_rng, {}, config_.sigma_rule));
        island.rmse = validation_rmse(*island.model, island.validation);
        island.rng = root_.derive(prefix + "/evolve");
        board_->publish(i, {island.model, island.rmse});
    });
    board_->commit();
    for (auto& island : islands_) refresh_elite(island, *board_, *settings_);

    ledger_ = std::make_unique<MigrationLedger>(topology_);
    const MigrationPolicy policy{config_.migrants_fraction, config_.rho, config_.ablation.attractiveness,
                                 config_.ablation.differential};
    update_differential_factors(*ledger_, islands_, policy);
    refresh_probabilities(*ledger_);
    times_.init_ms += elapsed_ms(start);
}

void Orchestrator::run_iterations(std::size_t iterations) {
    require(initialized_, "orchestrator not initialized");
    const auto& settings = *settings_;
    auto one = [&](std::size_t i) {
        auto tr = intra_island_iteration(islands_[i], *board_, settings);
        if (config_.trace) traces_[i].push_back(tr);
    };
    if (iterations == 0) {
        for (auto& island : islands_) refresh_elite(island, *board_, settings);
        return;
    }
    if (config_.board == BoardMode::Snapshot) {
        // Lockstep: every island reads the board as committed after the previous iteration.
        for (std::size_t it = 0; it < iterations; ++it) {
            for_each_island(one);
            board_->commit();
        }
    } else if (pool_) {
        for_each_island([&](std::size_t i) {
            for (std::size_t it = 0; it < iterations; ++it) one(i);
        });
    } else {
        for (std::size_t it = 0; it < iterations; ++it)
            for (std::size_t i = 0; i < islands_.size(); ++i) one(i);
    }
}

bool Orchestrator::step_epoch() {
    require(initialized_, "orchestrator not initialized");
    if (done_) return false;
    const auto start = Clock::now();

    run_iterations(config_.t_iter);
    times_.intra_ms += elapsed_ms(start);

    std::vector<Candidate> elites;
    elites.reserve(islands_.size());
    for (const auto& island : islands_) elites.push_back(island.elite);
    auto best = global_elite(elites, *board_);
    history_.push_back({std::move(best.candidate), best.island, best.score, std::move(best.scores), 0.0});

    std::vector<double> fitness;
    for (const auto& e : history_) fitness.push_back(e.global_fitness);
    if (config_.early_stop && early_stop(fitness, config_.es)) {
        stopped_early_ = true;
        done_ = true;
    } else if (history_.size() >= config_.epochs()) {
        done_ = true;
    } else if (config_.ablation.migration) {
        const auto mig_start = Clock::now();
        migrate();
        times_.migration_ms += elapsed_ms(mig_start);
    }
    history_.back().wall_ms = elapsed_ms(start);
    return !done_;
}

void Orchestrator::migrate() {
    const MigrationPolicy policy{config_.migrants_fraction, config_.rho, config_.ablation.attractiveness,
                                 config_.ablation.differential};
    const std::size_t epoch = history_.size();
    update_attractiveness_from_effects(*ledger_, islands_, policy);
    update_differential_factors(*ledger_, islands_, policy);
    refresh_probabilities(*ledger_);

    RngStream rng = root_.derive("migration/" + std::to_string(epoch));
    last_migration_ = perform_migration(islands_, *ledger_, config_.migrants_fraction, rng);
    ledger_->pending = last_migration_;

    for (std::size_t i = 0; i < ledger_->islands(); ++i) {
        for (const auto& e : ledger_->out_edges(i)) {
            MigrationLogRow row{epoch, i, e.target, e.mp, e.tau, e.v, 0, 0, std::nullopt};
            for (const auto& rec : last_migration_)
                if (rec.source == i && rec.target == e.target) {
                    row.num_migrants = rec.migrants.size();
                    row.rank_sum = rec.rank_sum();
                }
            if (auto it = ledger_->last_theta_raw.find(e.target); it != ledger_->last_theta_raw.end())
                row.theta_raw = it->second;
            migration_log_.push_back(row);
        }
    }
}

RunResult Orchestrator::finish() {
    require(initialized_, "orchestrator not initialized");
    require(!history_.empty(), "finish: no epoch has run");
    done_ = true;

    RunResult r;
    r.config = config_;
    r.problem = problem_.name();
    r.dim = problem_.dim();
    r.elite_history = history_;
    r.epochs_executed = history_.size();
    r.stopped_early = stopped_early_;

    std::size_t best = 0;
    for (std::size_t e = 1; e < history_.size(); ++e)
        if (history_[e].global_fitness < history_[best].global_fitness) best = e;
    r.best_candidate = history_[best].elite;
    r.best_estimated_fitness = history_[best].global_fitness;
    r.last_elite = history_.back().elite;
    r.last_elite_fitness = history_.back().global_fitness;

    problem_.set_fe_limit(problem_.fe_count() + 1);
    try {
        r.final_real_fitness = problem_.evaluate(r.best_candidate);
    } catch (...) {
        problem_.set_fe_limit(original_limit_);
        throw;
    }
    problem_.set_fe_limit(original_limit_);
    r.real_evaluations = problem_.fe_count() - fe_start_;

    for (std::size_t i = 0; i < traces_.size(); ++i) r.trace.insert(r.trace.end(), traces_[i].begin(), traces_[i].end());
    std::stable_sort(r.trace.begin(), r.trace.end(), [](const IterationTrace& a, const IterationTrace& b) {
        return a.iter != b.iter ? a.iter < b.iter : a.island < b.island;
    });
    r.migration_log = migration_log_;
    times_.total_ms = times_.init_ms + times_.intra_ms + times_.migration_ms;
    r.times = times_;
    return r;
}

RunResult run(const RunConfig& config, BenchmarkProblem& problem) {
    const auto start = Clock::now();
    Orchestrator orchestrator(config, problem);
    orchestrator.initialize();
    while (orchestrator.step_epoch()) {
    }
    auto result = orchestrator.finish();
    result.times.total_ms = elapsed_ms(start);
    return result;
}

}  // namespace islekit
