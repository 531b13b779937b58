// islekit command line: single runs, campaigns, performance profiles, speedup.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "islekit/benchmarks.hpp"
#include "islekit/experiments.hpp"
#include "islekit/orchestrator.hpp"
#include "islekit/sampling.hpp"

namespace fs = std::filesystem;
using namespace islekit;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitBudget = 3;

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p);
    if (!out) throw Error("cannot write " + p.string());
    return out;
}

struct RunArgs {
    std::string config;
    std::string function = "rastrigin";
    std::size_t dim = 50;
    std::uint64_t seed = 0;
    std::uint64_t problem_seed = 0;
    std::string variant;
    std::size_t threads = 0;
    std::string board;
    std::string out;
    std::string save_dataset;
    std::string load_dataset;
    bool trace = false;
};

int cmd_run(const RunArgs& a) {
    RunConfig config = a.config.empty() ? RunConfig{} : load_config(a.config);
    if (!a.variant.empty()) config = apply_variant(config, variant_from_string(a.variant));
    config.seed = a.seed;
    if (a.threads > 0) {
        config.threads = a.threads;
        config.scheduler = a.threads > 1 ? SchedulerMode::Parallel : SchedulerMode::Serial;
    }
    if (a.board == "snapshot") config.board = BoardMode::Snapshot;
    else if (a.board == "live") config.board = BoardMode::Live;
    else if (!a.board.empty()) throw ConfigError("board", "expected 'live' or 'snapshot'");
    if (a.trace) config.trace = true;
    config.validate();

    auto problem = make_problem(a.function, a.dim, a.problem_seed);
    Orchestrator orch(config, problem);
    if (!a.load_dataset.empty()) {
        auto data = read_dataset_csv(a.load_dataset);
        if (!data.samples.empty() && data.samples.front().candidate.dim() != a.dim)
            throw ConfigError("dim", "cached dataset dimension does not match --dim");
        orch.initialize(std::move(data));
    } else {
        orch.initialize();
    }
    if (!a.save_dataset.empty()) write_dataset_csv(orch.dataset(), a.save_dataset);
    while (orch.step_epoch()) {
    }
    const auto result = orch.finish();

    const auto j = to_json(result);
    if (a.out.empty()) {
        std::cout << j.dump(2) << '\n';
        return 0;
    }
    const fs::path dir = a.out;
    fs::create_directories(dir);
    open_out(dir / "result.json") << j.dump(2) << '\n';
    open_out(dir / "problem.json") << problem_manifest(problem).dump(2) << '\n';
    {
        auto conv = open_out(dir / "convergence.csv");
        write_convergence_csv(result, conv);
    }
    {
        auto mig = open_out(dir / "migration.csv");
        write_migration_csv(result, mig);
    }
    if (config.trace) {
        auto tr = open_out(dir / "trace.csv");
        write_trace_csv(result, tr);
    }
    std::cout << "best_estimated_fitness " << result.best_estimated_fitness << "\nfinal_real_fitness "
              << result.final_real_fitness << "\nepochs " << result.epochs_executed << "\nwrote " << dir.string()
              << '\n';
    return 0;
}

int cmd_campaign(const std::string& manifest) {
    std::ifstream in(manifest);
    if (!in) throw ConfigError("manifest", "cannot open " + manifest);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("manifest", e.what());
    }
    const auto spec = campaign_from_json(j, fs::path(manifest).parent_path());
    const auto outcome = run_campaign(spec);
    std::size_t failed = 0;
    for (const auto& c : outcome.cells) failed += c.error ? 1 : 0;
    std::cout << "function,dim,variant,runs,mean,std\n";
    for (const auto& a : aggregate(outcome.cells))
        std::cout << a.function << ',' << a.dim << ',' << a.variant << ',' << a.runs << ',' << a.mean << ','
                  << a.stddev << '\n';
    std::cout << "rows written to " << outcome.csv.string() << " (" << outcome.cells.size() - failed << " ok, "
              << failed << " failed)\n";
    return 0;
}

int cmd_profile(const std::string& in, const std::vector<double>& taus, const std::string& out) {
    const auto profile = profile_from_cells(read_campaign_csv(in), taus);
    if (out.empty()) {
        write_profile_csv(profile, std::cout);
    } else {
        auto f = open_out(out);
        write_profile_csv(profile, f);
    }
    return 0;
}

int cmd_speedup(const std::string& config_path, const std::vector<std::size_t>& threads, const std::string& function,
                std::size_t dim, std::size_t runs) {
    RunConfig config = config_path.empty() ? RunConfig{} : load_config(config_path);
    const auto rows = measure_speedup(config, function, dim, threads, runs);
    write_speedup_csv(rows, std::cout);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Island-model offline data-driven optimizer"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "Run one optimization");
    run->add_option("--config", run_args.config, "JSON run configuration");
    run->add_option("--function", run_args.function, "Benchmark function")->check(CLI::IsMember(available_problems()));
    run->add_option("--dim", run_args.dim, "Dimension")->check(CLI::PositiveNumber);
    run->add_option("--seed", run_args.seed, "Run seed");
    run->add_option("--problem-seed", run_args.problem_seed, "Benchmark instance seed");
    run->add_option("--variant", run_args.variant, "Ablation variant (full, noh, nof, nom, noa, nod, blank)");
    run->add_option("--threads", run_args.threads, "Worker threads; more than 1 selects the parallel scheduler");
    run->add_option("--board", run_args.board, "Board mode: live or snapshot");
    run->add_option("--out", run_args.out, "Output directory (default: JSON to stdout)");
    run->add_option("--save-dataset", run_args.save_dataset, "Write the offline dataset to this CSV");
    run->add_option("--load-dataset", run_args.load_dataset, "Reuse an offline dataset CSV instead of sampling");
    run->add_flag("--trace", run_args.trace, "Record per-iteration traces");

    std::string manifest;
    auto* campaign = app.add_subcommand("campaign", "Run a multi-seed campaign");
    campaign->add_option("--manifest", manifest, "Campaign manifest JSON")->required();

    std::string profile_in, profile_out;
    std::vector<double> taus;
    auto* profile = app.add_subcommand("profile", "Performance profile from a campaign CSV");
    profile->add_option("--in", profile_in, "Campaign CSV")->required();
    profile->add_option("--tau", taus, "Tau grid (default: all observed ratios)")->delimiter(',');
    profile->add_option("--out", profile_out, "Output CSV (default: stdout)");

    std::string speed_config, speed_function = "rastrigin";
    std::vector<std::size_t> speed_threads{1, 2, 4, 8};
    std::size_t speed_dim = 50, speed_runs = 5;
    auto* speedup = app.add_subcommand("speedup", "Serial vs parallel wall-time ratios");
    speedup->add_option("--config", speed_config, "JSON run configuration");
    speedup->add_option("--threads", speed_threads, "Thread counts")->delimiter(',');
    speedup->add_option("--function", speed_function, "Benchmark function")
        ->check(CLI::IsMember(available_problems()));
    speedup->add_option("--dim", speed_dim, "Dimension")->check(CLI::PositiveNumber);
    speedup->add_option("--runs", speed_runs, "Seeds per thread count")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*run) return cmd_run(run_args);
        if (*campaign) return cmd_campaign(manifest);
        if (*profile) return cmd_profile(profile_in, taus, profile_out);
        if (*speedup) return cmd_speedup(speed_config, speed_threads, speed_function, speed_dim, speed_runs);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const UnknownProblem& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget violation: " << e.what() << '\n';
        return kExitBudget;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
