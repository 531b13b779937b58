#include "islekit/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "islekit/benchmarks.hpp"

namespace islekit {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

template <class T>
T get_as(const nlohmann::json& j, const std::string& key) {
    try {
        return j.get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(key, std::string("wrong type: ") + e.what());
    }
}

std::size_t get_count(const nlohmann::json& j, const std::string& key) {
    if (!j.is_number_integer() && !j.is_number_unsigned()) throw ConfigError(key, "expected a non-negative integer");
    const auto v = j.get<long long>();
    if (v < 0) throw ConfigError(key, "expected a non-negative integer");
    return static_cast<std::size_t>(v);
}

double get_number(const nlohmann::json& j, const std::string& key) {
    if (!j.is_number()) throw ConfigError(key, "expected a number");
    return j.get<double>();
}

std::string format_double(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string csv_row(const CellResult& c) {
    std::ostringstream os;
    os << c.function << ',' << c.dim << ',' << c.variant << ',' << c.seed << ',' << format_double(c.best_estimated)
       << ',' << format_double(c.final_real) << ',' << c.epochs << ',' << (c.stopped_early ? 1 : 0) << ','
       << format_double(c.wall_ms);
    return os.str();
}

}  // namespace

std::string to_string(AblationVariant v) {
    switch (v) {
    case AblationVariant::Full: return "full";
    case AblationVariant::NoH: return "noh";
    case AblationVariant::NoF: return "nof";
    case AblationVariant::NoM: return "nom";
    case AblationVariant::NoA: return "noa";
    case AblationVariant::NoD: return "nod";
    case AblationVariant::Blank: return "blank";
    }
    return "full";
}

AblationVariant variant_from_string(const std::string& name) {
    const auto n = lower(name);
    for (auto v : all_variants())
        if (to_string(v) == n) return v;
    throw ConfigError("variant", "unknown variant '" + name + "' (full, noh, nof, nom, noa, nod, blank)");
}

const std::vector<AblationVariant>& all_variants() {
    static const std::vector<AblationVariant> v{AblationVariant::Full, AblationVariant::NoH, AblationVariant::NoF,
                                                AblationVariant::NoM,  AblationVariant::NoA, AblationVariant::NoD,
                                                AblationVariant::Blank};
    return v;
}

AblationFlags flags_for(AblationVariant v) {
    AblationFlags f;
    switch (v) {
    case AblationVariant::Full: break;
    case AblationVariant::NoH: f.diverse_data = false; break;
    case AblationVariant::NoF: f.fine_tune = false; break;
    case AblationVariant::NoM: f.migration = false; break;
    case AblationVariant::NoA: f.attractiveness = false; break;
    case AblationVariant::NoD: f.differential = false; break;
    case AblationVariant::Blank:
        f.diverse_data = false;
        f.fine_tune = false;
        f.migration = false;
        break;
    }
    return f;
}

RunConfig apply_variant(RunConfig config, AblationVariant v) {
    config.ablation = flags_for(v);
    config.variant = to_string(v);
    return config;
}

RunConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("", "configuration must be a JSON object");
    RunConfig c;
    std::optional<AblationVariant> variant;
    for (const auto& [key, value] : j.items()) {
        if (key == "T") c.islands = get_count(value, key);
        else if (key == "n") c.population = get_count(value, key);
        else if (key == "t_iter") c.t_iter = get_count(value, key);
        else if (key == "max_iter") c.max_iter = get_count(value, key);
        else if (key == "es") c.es = get_count(value, key);
        else if (key == "early_stop") c.early_stop = get_as<bool>(value, key);
        else if (key == "rho") c.rho = get_number(value, key);
        else if (key == "l") c.pseudo_count = get_count(value, key);
        else if (key == "migrants_fraction") c.migrants_fraction = get_number(value, key);
        else if (key == "topology") {
            try {
                c.topology = topology_from_string(get_as<std::string>(value, key));
            } catch (const ConfigError&) {
                throw;
            } catch (const Error& e) {
                throw ConfigError(key, e.what());
            }
        } else if (key == "eta_c") c.eta_c = get_number(value, key);
        else if (key == "eta_m") c.eta_m = get_number(value, key);
        else if (key == "p_cross") c.p_cross = get_number(value, key);
        else if (key == "p_mut") {
            if (value.is_null()) c.p_mut.reset();
            else c.p_mut = get_number(value, key);
        } else if (key == "budget") c.budget = get_count(value, key);
        else if (key == "seed") c.seed = get_count(value, key);
        else if (key == "variant") variant = variant_from_string(get_as<std::string>(value, key));
        else if (key == "scheduler") {
            const auto s = lower(get_as<std::string>(value, key));
            if (s == "serial") c.scheduler = SchedulerMode::Serial;
            else if (s == "parallel") c.scheduler = SchedulerMode::Parallel;
            else throw ConfigError(key, "expected 'serial' or 'parallel'");
        } else if (key == "threads") c.threads = get_count(value, key);
        else if (key == "board") {
            const auto s = lower(get_as<std::string>(value, key));
            if (s == "live") c.board = BoardMode::Live;
            else if (s == "snapshot") c.board = BoardMode::Snapshot;
            else throw ConfigError(key, "expected 'live' or 'snapshot'");
        } else if (key == "trace") c.trace = get_as<bool>(value, key);
        else if (key == "sigma_rule") c.sigma_rule = spread_rule_from_string(lower(get_as<std::string>(value, key)));
        else throw ConfigError(key, "unknown configuration key");
    }
    if (variant) c = apply_variant(c, *variant);
    c.validate();
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open config file " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("", path.string() + ": " + e.what());
    }
    return config_from_json(j);
}

CampaignSpec campaign_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
    if (!j.is_object()) throw ConfigError("", "campaign manifest must be a JSON object");
    CampaignSpec spec;
    spec.variants = {AblationVariant::Full};
    spec.out_csv = "results.csv";
    for (const auto& [key, value] : j.items()) {
        if (key == "config") {
            if (value.is_string()) {
                std::filesystem::path p = value.get<std::string>();
                spec.base = load_config(p.is_relative() ? base_dir / p : p);
            } else {
                spec.base = config_from_json(value);
            }
        } else if (key == "functions") {
            spec.functions = get_as<std::vector<std::string>>(value, key);
        } else if (key == "dims") {
            for (const auto& d : get_as<nlohmann::json>(value, key)) spec.dims.push_back(get_count(d, key));
        } else if (key == "variants") {
            spec.variants.clear();
            for (const auto& v : get_as<std::vector<std::string>>(value, key))
                spec.variants.push_back(variant_from_string(v));
        } else if (key == "seeds") {
            if (value.is_object()) {
                if (!value.contains("count")) throw ConfigError("seeds", "expected {\"count\": k}");
                const auto k = get_count(value["count"], "seeds.count");
                const auto first = value.contains("first") ? get_count(value["first"], "seeds.first") : 0;
                for (std::size_t s = 0; s < k; ++s) spec.seeds.push_back(first + s);
            } else {
                for (const auto& s : get_as<nlohmann::json>(value, key)) spec.seeds.push_back(get_count(s, key));
            }
        } else if (key == "workers") {
            spec.workers = get_count(value, key);
        } else if (key == "problem_seed") {
            spec.problem_seed = get_count(value, key);
        } else if (key == "out") {
            spec.out_csv = get_as<std::string>(value, key);
        } else {
            throw ConfigError(key, "unknown manifest key");
        }
    }
    if (spec.functions.empty()) throw ConfigError("functions", "need at least one function");
    if (spec.dims.empty()) throw ConfigError("dims", "need at least one dimension");
    if (spec.variants.empty()) throw ConfigError("variants", "need at least one variant");
    if (spec.seeds.empty()) throw ConfigError("seeds", "need at least one seed");
    if (spec.workers < 1) throw ConfigError("workers", "must be at least 1");
    const auto& names = available_problems();
    for (const auto& f : spec.functions)
        if (std::find(names.begin(), names.end(), f) == names.end())
            throw ConfigError("functions", "unknown function '" + f + "'");
    if (spec.out_csv.is_relative() && !base_dir.empty()) spec.out_csv = base_dir / spec.out_csv;
    return spec;
}

std::filesystem::path campaign_output_path(const std::filesystem::path& requested) {
    if (!std::filesystem::exists(requested)) return requested;
    const auto dir = requested.parent_path();
    const auto stem = requested.stem().string();
    const auto ext = requested.extension().string();
    for (std::size_t k = 2;; ++k) {
        auto candidate = dir / (stem + ".run" + std::to_string(k) + ext);
        if (!std::filesystem::exists(candidate)) return candidate;
    }
}

CellResult run_cell(const RunConfig& base, const std::string& function, std::size_t dim, AblationVariant variant,
                    std::uint64_t seed, std::uint64_t problem_seed) {
    CellResult cell;
    cell.function = function;
    cell.dim = dim;
    cell.variant = to_string(variant);
    cell.seed = seed;
    const auto start = std::chrono::steady_clock::now();
    try {
        auto config = apply_variant(base, variant);
        config.seed = seed;
        auto problem = make_problem(function, dim, problem_seed);
        const auto result = run(config, problem);
        cell.best_estimated = result.best_estimated_fitness;
        cell.final_real = result.final_real_fitness;
        cell.epochs = result.epochs_executed;
        cell.stopped_early = result.stopped_early;
    } catch (const std::exception& e) {
        cell.error = e.what();
    }
    cell.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return cell;
}

CampaignOutcome run_campaign(const CampaignSpec& spec) {
    struct Job {
        std::string function;
        std::size_t dim;
        AblationVariant variant;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (const auto& f : spec.functions)
        for (auto d : spec.dims)
            for (auto v : spec.variants)
                for (auto s : spec.seeds) jobs.push_back({f, d, v, s});
    require(!jobs.empty(), "run_campaign: empty grid");

    CampaignOutcome outcome;
    outcome.csv = campaign_output_path(spec.out_csv);
    if (outcome.csv.has_parent_path()) std::filesystem::create_directories(outcome.csv.parent_path());
    std::ofstream out(outcome.csv);
    if (!out) throw Error("cannot write " + outcome.csv.string());
    out << kCampaignHeader << '\n' << std::flush;
    const auto failures_path = outcome.csv.parent_path() / (outcome.csv.stem().string() + ".failures.csv");
    std::ofstream failures;

    outcome.cells.resize(jobs.size());
    std::mutex writer;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < jobs.size(); i = next.fetch_add(1)) {
            const auto& job = jobs[i];
            auto cell = run_cell(spec.base, job.function, job.dim, job.variant, job.seed, spec.problem_seed);
            std::lock_guard lock(writer);
            if (cell.error) {
                if (!failures.is_open()) {
                    failures.open(failures_path);
                    failures << "function,dim,variant,seed,error\n";
                }
                std::string msg = *cell.error;
                std::replace(msg.begin(), msg.end(), ',', ';');
                std::replace(msg.begin(), msg.end(), '\n', ' ');
                failures << cell.function << ',' << cell.dim << ',' << cell.variant << ',' << cell.seed << ',' << msg
                         << '\n'
                         << std::flush;
                std::cerr << "cell " << cell.function << '/' << cell.dim << '/' << cell.variant << '/' << cell.seed
                          << " failed: " << *cell.error << '\n';
            } else {
                out << csv_row(cell) << '\n' << std::flush;
            }
            outcome.cells[i] = std::move(cell);
        }
    };
    const auto n = std::min(spec.workers, jobs.size());
    std::vector<std::thread> threads;
    for (std::size_t t = 1; t < n; ++t) threads.emplace_back(worker);
    worker();
    for (auto& t : threads) t.join();
    return outcome;
}

std::vector<CellResult> read_campaign_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != kCampaignHeader)
        throw ContractViolation(path.string() + ": not a campaign CSV (unexpected header)");
    std::vector<CellResult> cells;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 9) throw ContractViolation(path.string() + ": malformed row " + std::to_string(row));
        try {
            CellResult c;
            c.function = f[0];
            c.dim = std::stoul(f[1]);
            c.variant = f[2];
            c.seed = std::stoull(f[3]);
            c.best_estimated = std::stod(f[4]);
            c.final_real = std::stod(f[5]);
            c.epochs = std::stoul(f[6]);
            c.stopped_early = f[7] == "1";
            c.wall_ms = std::stod(f[8]);
            cells.push_back(std::move(c));
        } catch (const std::logic_error&) {
            throw ContractViolation(path.string() + ": malformed row " + std::to_string(row));
        }
    }
    return cells;
}

std::vector<CellAggregate> aggregate(const std::vector<CellResult>& cells) {
    std::map<std::tuple<std::string, std::size_t, std::string>, std::vector<double>> groups;
    std::vector<std::tuple<std::string, std::size_t, std::string>> order;
    for (const auto& c : cells) {
        if (c.error) continue;
        auto key = std::make_tuple(c.function, c.dim, c.variant);
        auto [it, inserted] = groups.try_emplace(key);
        if (inserted) order.push_back(key);
        it->second.push_back(c.final_real);
    }
    std::vector<CellAggregate> out;
    for (const auto& key : order) {
        const auto& v = groups[key];
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        double var = 0.0;
        for (double x : v) var += (x - mean) * (x - mean);
        var /= static_cast<double>(v.size());
        out.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), v.size(), mean, std::sqrt(var)});
    }
    return out;
}

PerformanceProfile performance_profile(const std::vector<std::vector<double>>& values,
                                       const std::vector<std::string>& solvers, std::vector<double> taus) {
    require(!values.empty(), "performance_profile: no problems");
    require(!solvers.empty(), "performance_profile: no solvers");
    const auto s_count = solvers.size();
    std::vector<std::vector<double>> ratios(values.size(), std::vector<double>(s_count));
    for (std::size_t p = 0; p < values.size(); ++p) {
        require(values[p].size() == s_count, "performance_profile: ragged result matrix");
        for (double x : values[p])
            if (!(x > 0.0) || !std::isfinite(x))
                throw ContractViolation("performance_profile: results must be positive and finite (shift them first)");
        const double best = *std::min_element(values[p].begin(), values[p].end());
        for (std::size_t s = 0; s < s_count; ++s) ratios[p][s] = values[p][s] / best;
    }
    if (taus.empty()) {
        std::set<double> grid;
        for (const auto& row : ratios) grid.insert(row.begin(), row.end());
        taus.assign(grid.begin(), grid.end());
    } else {
        std::sort(taus.begin(), taus.end());
    }

    PerformanceProfile prof;
    prof.solvers = solvers;
    prof.taus = taus;
    prof.rho.assign(s_count, std::vector<double>(taus.size(), 0.0));
    const auto problems = static_cast<double>(values.size());
    for (std::size_t s = 0; s < s_count; ++s)
        for (std::size_t k = 0; k < taus.size(); ++k) {
            std::size_t hits = 0;
            for (const auto& row : ratios)
                if (row[s] <= taus[k]) ++hits;
            prof.rho[s][k] = static_cast<double>(hits) / problems;
        }
    return prof;
}

PerformanceProfile profile_from_cells(const std::vector<CellResult>& cells, std::vector<double> taus) {
    std::vector<std::string> solvers;
    std::vector<std::pair<std::string, std::size_t>> problems;
    for (const auto& c : cells) {
        if (c.error) continue;
        if (std::find(solvers.begin(), solvers.end(), c.variant) == solvers.end()) solvers.push_back(c.variant);
        const auto key = std::make_pair(c.function, c.dim);
        if (std::find(problems.begin(), problems.end(), key) == problems.end()) problems.push_back(key);
    }
    require(!problems.empty(), "profile_from_cells: no successful cells");
    std::map<std::tuple<std::string, std::size_t, std::string>, CellAggregate> agg;
    for (const auto& a : aggregate(cells)) agg[{a.function, a.dim, a.variant}] = a;
    std::vector<std::vector<double>> values;
    for (const auto& [f, d] : problems) {
        std::vector<double> row;
        for (const auto& s : solvers) {
            auto it = agg.find({f, d, s});
            if (it == agg.end())
                throw ContractViolation("profile_from_cells: variant " + s + " has no result on " + f + "/" +
                                        std::to_string(d));
            row.push_back(it->second.mean);
        }
        values.push_back(std::move(row));
    }
    return performance_profile(values, solvers, std::move(taus));
}

void write_profile_csv(const PerformanceProfile& profile, std::ostream& out) {
    out << "tau";
    for (const auto& s : profile.solvers) out << ',' << s;
    out << '\n';
    for (std::size_t k = 0; k < profile.taus.size(); ++k) {
        out << format_double(profile.taus[k]);
        for (std::size_t s = 0; s < profile.solvers.size(); ++s) out << ',' << format_double(profile.rho[s][k]);
        out << '\n';
    }
}

double median(std::vector<double> values) {
    require(!values.empty(), "median: empty input");
    std::sort(values.begin(), values.end());
    const auto n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<SpeedupRow> measure_speedup(const RunConfig& base, const std::string& function, std::size_t dim,
                                        const std::vector<std::size_t>& thread_counts, std::size_t runs) {
    require(runs > 0, "measure_speedup: need at least one run");
    require(!thread_counts.empty(), "measure_speedup: no thread counts");
    auto timed = [&](RunConfig config) {
        auto problem = make_problem(function, dim, 0);
        const auto start = std::chrono::steady_clock::now();
        run(config, problem);
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    };

    std::vector<double> serial(runs);
    for (std::size_t r = 0; r < runs; ++r) {
        auto config = base;
        config.seed = base.seed + r;
        config.scheduler = SchedulerMode::Serial;
        config.board = BoardMode::Live;
        config.threads = 1;
        serial[r] = timed(config);
    }

    std::vector<SpeedupRow> rows;
    for (auto threads : thread_counts) {
        require(threads >= 1, "measure_speedup: thread counts must be positive");
        SpeedupRow row;
        row.threads = threads;
        row.serial_ms = serial;
        std::vector<double> ratios;
        for (std::size_t r = 0; r < runs; ++r) {
            auto config = base;
            config.seed = base.seed + r;
            config.scheduler = SchedulerMode::Parallel;
            config.board = BoardMode::Live;
            config.threads = threads;
            row.parallel_ms.push_back(timed(config));
            ratios.push_back(serial[r] / row.parallel_ms.back());
        }
        row.median_serial_ms = median(row.serial_ms);
        row.median_parallel_ms = median(row.parallel_ms);
        row.median_speedup = median(ratios);
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_speedup_csv(const std::vector<SpeedupRow>& rows, std::ostream& out) {
    out << "threads,median_serial_ms,median_parallel_ms,median_speedup\n";
    for (const auto& r : rows)
        out << r.threads << ',' << format_double(r.median_serial_ms) << ',' << format_double(r.median_parallel_ms)
            << ',' << format_double(r.median_speedup) << '\n';
}

void write_convergence_csv(const RunResult& result, std::ostream& out) {
    const std::size_t t = result.elite_history.empty() ? 0 : result.elite_history.front().per_island_elite_fitness.size();
    out << "epoch,global_fitness";
    for (std::size_t i = 0; i < t; ++i) out << ",island_" << i;
    out << '\n';
    for (std::size_t e = 0; e < result.elite_history.size(); ++e) {
        const auto& rec = result.elite_history[e];
        out << e + 1 << ',' << format_double(rec.global_fitness);
        for (double f : rec.per_island_elite_fitness) out << ',' << format_double(f);
        out << '\n';
    }
}

void write_trace_csv(const RunResult& result, std::ostream& out) {
    out << "island,iter,best_score,mean_score,rmse\n";
    for (const auto& tr : result.trace)
        out << tr.island << ',' << tr.iter << ',' << format_double(tr.best_score) << ','
            << format_double(tr.mean_score) << ',' << format_double(tr.rmse) << '\n';
}

void write_migration_csv(const RunResult& result, std::ostream& out) {
    out << "epoch,source,target,mp,tau,v,num_migrants,rank_sum,theta_raw\n";
    for (const auto& m : result.migration_log) {
        out << m.epoch << ',' << m.source << ',' << m.target << ',' << format_double(m.mp) << ',' << format_double(m.tau)
            << ',' << format_double(m.v) << ',' << m.num_migrants << ',' << m.rank_sum << ',';
        if (m.theta_raw) out << format_double(*m.theta_raw);
        out << '\n';
    }
}

}  // namespace islekit
