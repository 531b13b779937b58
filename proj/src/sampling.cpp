#include "islekit/sampling.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>

namespace islekit {

std::vector<Candidate> latin_hypercube(std::size_t n, const Bounds& bounds, RngStream& rng) {
    if (n == 0) throw InsufficientData("latin_hypercube: requested zero samples");
    const auto d = static_cast<Eigen::Index>(bounds.dim());
    std::vector<Candidate> points(n, Candidate(Vector(d)));
    const double strata = static_cast<double>(n);
    for (Eigen::Index j = 0; j < d; ++j) {
        const double lo = bounds.lower()[j];
        const double width = bounds.upper()[j] - lo;
        const auto order = rng.permutation(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double u = (static_cast<double>(order[i]) + rng.uniform()) / strata;
            points[i].genes[j] = std::min(lo + u * width, bounds.upper()[j]);
        }
    }
    return points;
}

OfflineDataset build_offline_dataset(BenchmarkProblem& problem, std::size_t n, RngStream& rng) {
    OfflineDataset dataset;
    if (n == 0) return dataset;
    if (auto limit = problem.fe_limit(); limit && problem.fe_count() + n > *limit)
        throw BudgetExceeded("offline dataset of " + std::to_string(n) + " samples exceeds the FE budget");
    auto design = latin_hypercube(n, problem.bounds(), rng);
    dataset.samples.reserve(n);
    for (auto& x : design) {
        const double f = problem.evaluate(x);
        dataset.samples.push_back({std::move(x), f, Provenance::Real});
    }
    dataset.budget_used = n;
    return dataset;
}

IslandDataSplit partition_island_data(const OfflineDataset& dataset, RngStream& rng) {
    const std::size_t n = dataset.size();
    if (n < 3) throw InsufficientData("partition_island_data: need at least 3 samples");
    const std::size_t k = train_size_for(n);
    auto order = rng.sample_without_replacement(n, n);
    IslandDataSplit split;
    split.train.reserve(k);
    split.validation.reserve(n - k);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = dataset.samples[order[i]];
        (i < k ? split.train : split.validation).push_back(s);
    }
    return split;
}

void write_dataset_csv(const OfflineDataset& dataset, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write dataset cache " + path.string());
    const std::size_t d = dataset.samples.empty() ? 0 : dataset.samples.front().candidate.dim();
    for (std::size_t j = 0; j < d; ++j) out << "x_" << j << ',';
    out << "f\n";
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (const auto& s : dataset.samples) {
        for (std::size_t j = 0; j < d; ++j) out << s.candidate[j] << ',';
        out << s.label << '\n';
    }
}

OfflineDataset read_dataset_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read dataset cache " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw Error("empty dataset cache " + path.string());
    std::size_t columns = 1;
    for (char c : line) columns += c == ',';
    if (columns < 2) throw Error("dataset cache header needs x_0..x_{d-1},f");

    OfflineDataset dataset;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        std::stringstream cells(line);
        std::string cell;
        std::vector<double> values;
        while (std::getline(cells, cell, ',')) values.push_back(std::stod(cell));
        if (values.size() != columns)
            throw Error("dataset cache row " + std::to_string(row) + " has " + std::to_string(values.size()) +
                        " columns, expected " + std::to_string(columns));
        Vector genes(static_cast<Eigen::Index>(columns - 1));
        for (std::size_t j = 0; j + 1 < columns; ++j) genes[static_cast<Eigen::Index>(j)] = values[j];
        dataset.samples.push_back({Candidate(std::move(genes)), values.back(), Provenance::Real});
    }
    dataset.budget_used = dataset.samples.size();
    return dataset;
}

}  // namespace islekit
