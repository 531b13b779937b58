#pragma once

// Per-island state and the versioned board through which islands share their
// latest surrogate and validation error.

#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "islekit/core.hpp"
#include "islekit/ensemble.hpp"
#include "islekit/surrogate.hpp"

namespace islekit {

struct Population {
    std::vector<Candidate> members;
    /// Ensemble scores from the last environmental selection, aligned with members.
    std::optional<std::vector<double>> scores;

    std::size_t size() const noexcept { return members.size(); }
};

struct BoardEntry {
    ModelRef model;
    ValidationScore rmse;
};

enum class BoardMode {
    Live,      // reads see the latest publish immediately
    Snapshot,  // reads see the state as of the last commit()
};

/// T-slot registry of (model, rmse). Slot i is written only by island i; a read
/// returns model and rmse as one unit.
class SharedBoard {
public:
    explicit SharedBoard(std::size_t slots, BoardMode mode = BoardMode::Live);

    std::size_t size() const noexcept { return size_; }
    BoardMode mode() const noexcept { return mode_; }

    void publish(std::size_t slot, BoardEntry entry);
    std::optional<BoardEntry> read(std::size_t slot) const;
    /// Throws BoardStale if nothing has been published (and committed) to the slot.
    BoardEntry require_entry(std::size_t slot) const;

    /// Makes every pending publish visible. No-op in live mode.
    void commit();

    bool fully_populated() const;
    std::vector<BoardEntry> read_all() const;

private:
    struct Slot {
        mutable std::mutex mutex;
        std::optional<BoardEntry> visible;
        std::optional<BoardEntry> pending;
    };

    std::size_t size_;
    BoardMode mode_;
    std::unique_ptr<Slot[]> slots_;
};

struct IslandState {
    std::size_t id = 0;
    std::vector<std::size_t> neighbors;
    std::vector<LabeledSample> train;       // D_i
    std::vector<LabeledSample> validation;  // V_i
    Population population;
    ModelRef model;
    ValidationScore rmse;
    Candidate elite;
    double elite_score = 0.0;
    RngStream rng{0, "island"};
    std::size_t iterations = 0;
};

}  // namespace islekit
