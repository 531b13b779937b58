#pragma once

#include <memory>

#include "islekit/benchmarks.hpp"
#include "islekit/orchestrator.hpp"

// A small initialized island model for tests that need real islands, models
// and a populated board.
struct SmallIslandModel {
    islekit::BenchmarkProblem problem;
    std::unique_ptr<islekit::Orchestrator> orchestrator;

    SmallIslandModel(islekit::RunConfig config, const std::string& function = "rastrigin", std::size_t d = 6)
        : problem(islekit::make_problem(function, d, 0)) {
        orchestrator = std::make_unique<islekit::Orchestrator>(config, problem);
        orchestrator->initialize();
    }
};

inline islekit::RunConfig small_config(std::size_t islands = 4, std::size_t n = 12, std::uint64_t seed = 1) {
    islekit::RunConfig c;
    c.islands = islands;
    c.population = n;
    c.t_iter = 5;
    c.max_iter = 20;
    c.budget = 60;
    c.seed = seed;
    c.topology = islekit::TopologyKind::VonNeumann;
    return c;
}
