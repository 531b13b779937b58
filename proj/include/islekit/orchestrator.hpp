#pragma once

// The island-model driver: initialization, the epoch loop (intra-island phase,
// global elite, early stop, adaptive migration), the global surrogate and the
// serial / parallel schedulers.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "islekit/benchmarks.hpp"
#include "islekit/evolution.hpp"
#include "islekit/island.hpp"
#include "islekit/migration.hpp"
#include "islekit/sampling.hpp"
#include "islekit/scheduler.hpp"

namespace islekit {

enum class SchedulerMode { Serial, Parallel };

/// Component switches used by the ablation variants.
struct AblationFlags {
    bool diverse_data = true;    // per-island 2/3 subsets; off = every island on the full set
    bool fine_tune = true;       // off = frozen model, selection by the own model only
    bool migration = true;
    bool attractiveness = true;  // off = tau pinned to 1
    bool differential = true;    // off = v pinned to 1

    friend bool operator==(const AblationFlags&, const AblationFlags&) = default;
};

struct RunConfig {
    std::size_t islands = 36;
    std::size_t population = 100;
    std::size_t t_iter = 90;
    std::size_t max_iter = 1800;
    std::size_t es = 3;
    bool early_stop = true;
    double rho = 0.1;
    std::size_t pseudo_count = 3;
    double migrants_fraction = 0.1;
    TopologyKind topology = TopologyKind::VonNeumann;
    double eta_c = 15.0;
    double eta_m = 15.0;
    double p_cross = 1.0;
    std::optional<double> p_mut;  // unset = 1/d
    std::size_t budget = 500;
    SpreadRule sigma_rule = SpreadRule::MaxDistanceOverSqrt2C;
    std::uint64_t seed = 0;
    std::string variant = "full";
    AblationFlags ablation;
    SchedulerMode scheduler = SchedulerMode::Serial;
    std::size_t threads = 1;
    BoardMode board = BoardMode::Live;
    bool trace = false;

    /// Throws ConfigError naming the offending key.
    void validate() const;
    std::size_t epochs() const { return max_iter / t_iter; }
};

nlohmann::json to_json(const RunConfig& config);

Topology make_topology(const RunConfig& config);

struct EpochRecord {
    Candidate elite;
    std::size_t elite_island = 0;
    double global_fitness = 0.0;
    std::vector<double> per_island_elite_fitness;
    double wall_ms = 0.0;
};

struct PhaseTimes {
    double init_ms = 0.0;
    double intra_ms = 0.0;
    double migration_ms = 0.0;
    double total_ms = 0.0;
};

struct MigrationLogRow {
    std::size_t epoch;
    std::size_t source;
    std::size_t target;
    double mp;
    double tau;
    double v;
    std::size_t num_migrants;
    std::size_t rank_sum;
    std::optional<double> theta_raw;
};

struct RunResult {
    RunConfig config;
    std::string problem;
    std::size_t dim = 0;
    Candidate best_candidate;        // history argmin under the global surrogate
    double best_estimated_fitness = 0.0;
    double final_real_fitness = 0.0;  // one true evaluation of best_candidate
    Candidate last_elite;             // elite of the final epoch
    double last_elite_fitness = 0.0;
    std::vector<EpochRecord> elite_history;
    std::size_t epochs_executed = 0;
    bool stopped_early = false;
    std::uint64_t real_evaluations = 0;
    PhaseTimes times;
    std::vector<IterationTrace> trace;
    std::vector<MigrationLogRow> migration_log;
};

/// {config_echo, best_estimated_fitness, final_real_fitness, epochs,
/// stopped_early, per_epoch: [...]}. Timings are wall-clock and therefore the
/// only nondeterministic fields; `include_timing = false` drops them.
nlohmann::json to_json(const RunResult& result, bool include_timing = true);

/// Inverse-RMSE weights over every slot of the board.
EnsembleWeights global_weights(const SharedBoard& board);

struct GlobalElite {
    Candidate candidate;
    std::size_t island = 0;
    double score = 0.0;
    std::vector<double> scores;  // per island elite
};

/// Scores each island elite with the global surrogate; ties go to the lower index.
GlobalElite global_elite(const std::vector<Candidate>& elites, const SharedBoard& board);

/// True when the first minimum of the history is more than es entries old.
bool early_stop(const std::vector<double>& fitness_history, std::size_t es);

/// Step-wise driver. run() is initialize + epochs until done + finish.
class Orchestrator {
public:
    Orchestrator(RunConfig config, BenchmarkProblem& problem);
    ~Orchestrator();

    /// Builds the offline dataset (config.budget real evaluations) and islands.
    void initialize();
    /// Same, from a cached dataset; no real evaluations are spent on it.
    void initialize(OfflineDataset dataset);

    /// Runs one epoch. Returns false once the loop is over (bound or early stop).
    bool step_epoch();
    /// Picks the best elite and spends the single assessment evaluation.
    RunResult finish();

    bool done() const noexcept { return done_; }
    std::size_t epochs_executed() const noexcept { return history_.size(); }
    const RunConfig& config() const noexcept { return config_; }
    const Topology& topology() const noexcept { return topology_; }
    const OfflineDataset& dataset() const noexcept { return dataset_; }
    const std::vector<IslandState>& islands() const noexcept { return islands_; }
    const SharedBoard& board() const noexcept { return *board_; }
    const MigrationLedger& ledger() const noexcept { return *ledger_; }
    const IslandSettings& settings() const noexcept { return *settings_; }
    const std::vector<EpochRecord>& history() const noexcept { return history_; }
    const std::vector<MigrationRecord>& last_migration() const noexcept { return last_migration_; }

    /// Runs `iterations` intra-island iterations on every island with the
    /// configured scheduler. step_epoch uses this with t_iter.
    void run_iterations(std::size_t iterations);

private:
    void build_islands();
    void migrate();
    template <class Fn>
    void for_each_island(Fn&& fn);

    RunConfig config_;
    BenchmarkProblem& problem_;
    RngStream root_;
    Topology topology_;
    std::optional<IslandSettings> settings_;
    OfflineDataset dataset_;
    std::vector<IslandState> islands_;
    std::unique_ptr<SharedBoard> board_;
    std::unique_ptr<MigrationLedger> ledger_;
    std::unique_ptr<WorkerPool> pool_;
    std::vector<EpochRecord> history_;
    std::vector<MigrationRecord> last_migration_;
    std::vector<std::vector<IterationTrace>> traces_;
    std::vector<MigrationLogRow> migration_log_;
    std::uint64_t fe_start_ = 0;
    std::optional<std::uint64_t> original_limit_;
    bool initialized_ = false;
    bool done_ = false;
    bool stopped_early_ = false;
    PhaseTimes times_;
};

RunResult run(const RunConfig& config, BenchmarkProblem& problem);

}  // namespace islekit
