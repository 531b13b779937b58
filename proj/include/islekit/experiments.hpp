#pragma once

// Configuration loading, ablation variants, multi-run campaigns, performance
// profiles and speedup measurement.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "islekit/orchestrator.hpp"

namespace islekit {

enum class AblationVariant { Full, NoH, NoF, NoM, NoA, NoD, Blank };

std::string to_string(AblationVariant v);
/// Accepts "full", "noh", "nof", "nom", "noa", "nod", "blank" (any case).
AblationVariant variant_from_string(const std::string& name);
const std::vector<AblationVariant>& all_variants();

AblationFlags flags_for(AblationVariant v);
/// Sets the ablation flags and variant name on a copy of the config.
RunConfig apply_variant(RunConfig config, AblationVariant v);

/// Parses a run configuration. Missing keys keep their defaults; unknown keys
/// and invalid values raise ConfigError naming the key.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

struct CellResult {
    std::string function;
    std::size_t dim = 0;
    std::string variant;
    std::uint64_t seed = 0;
    double best_estimated = 0.0;
    double final_real = 0.0;
    std::size_t epochs = 0;
    bool stopped_early = false;
    double wall_ms = 0.0;
    std::optional<std::string> error;  // set when the cell failed
};

struct CampaignSpec {
    RunConfig base;
    std::vector<std::string> functions;
    std::vector<std::size_t> dims;
    std::vector<AblationVariant> variants;
    std::vector<std::uint64_t> seeds;
    std::size_t workers = 1;  // concurrent runs
    std::filesystem::path out_csv;
    std::uint64_t problem_seed = 0;  // instance seed shared by all run seeds
};

/// {"config": {...}, "functions": [...], "dims": [...], "variants": [...],
///  "seeds": [...] or {"count": k}, "workers": w, "problem_seed": s,
///  "out": "results.csv"}. Relative paths resolve against base_dir.
CampaignSpec campaign_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});

inline constexpr const char* kCampaignHeader =
    "function,dim,variant,seed,best_estimated,final_real,epochs,stopped_early,wall_ms";

struct CampaignOutcome {
    std::vector<CellResult> cells;
    std::filesystem::path csv;
};
/// Runs every (function, dim, variant, seed) cell across `workers` threads.
/// Rows are appended to the CSV by a single writer as cells finish. An existing
/// output file is never touched; the run goes to a suffixed name instead.
/// Failed cells are recorded (and logged) without stopping the campaign.
/// Returns every cell in grid order.
CampaignOutcome run_campaign(const CampaignSpec& spec);
/// One run of the grid; errors are caught into CellResult::error.
CellResult run_cell(const RunConfig& base, const std::string& function, std::size_t dim, AblationVariant variant,
                    std::uint64_t seed, std::uint64_t problem_seed = 0);

/// `requested` if it does not exist yet, else the first free `<stem>.run<k><ext>`.
std::filesystem::path campaign_output_path(const std::filesystem::path& requested);

std::vector<CellResult> read_campaign_csv(const std::filesystem::path& path);

struct CellAggregate {
    std::string function;
    std::size_t dim = 0;
    std::string variant;
    std::size_t runs = 0;
    double mean = 0.0;
    double stddev = 0.0;  // population standard deviation
};

/// Mean and population stddev of final_real per (function, dim, variant); failed cells skipped.
std::vector<CellAggregate> aggregate(const std::vector<CellResult>& cells);

struct PerformanceProfile {
    std::vector<std::string> solvers;
    std::vector<double> taus;
    std::vector<std::vector<double>> rho;  // rho[solver][tau index]
};

/// values[problem][solver], all positive. With an empty grid the sorted
/// distinct performance ratios are used.
PerformanceProfile performance_profile(const std::vector<std::vector<double>>& values,
                                       const std::vector<std::string>& solvers, std::vector<double> taus = {});

/// Builds the problem-by-variant matrix from campaign cells (mean final_real per
/// (function, dim) and variant) and profiles it.
PerformanceProfile profile_from_cells(const std::vector<CellResult>& cells, std::vector<double> taus = {});

void write_profile_csv(const PerformanceProfile& profile, std::ostream& out);

struct SpeedupRow {
    std::size_t threads = 0;
    std::vector<double> serial_ms;
    std::vector<double> parallel_ms;
    double median_serial_ms = 0.0;
    double median_parallel_ms = 0.0;
    double median_speedup = 0.0;  // median over runs of serial / parallel
};

/// Times `runs` seeds on the serial and parallel schedulers (live board).
std::vector<SpeedupRow> measure_speedup(const RunConfig& base, const std::string& function, std::size_t dim,
                                        const std::vector<std::size_t>& thread_counts, std::size_t runs);
void write_speedup_csv(const std::vector<SpeedupRow>& rows, std::ostream& out);

double median(std::vector<double> values);

void write_convergence_csv(const RunResult& result, std::ostream& out);
void write_trace_csv(const RunResult& result, std::ostream& out);
void write_migration_csv(const RunResult& result, std::ostream& out);

}  // namespace islekit
