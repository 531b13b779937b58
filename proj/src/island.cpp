#include "islekit/island.hpp"

#include <string>

namespace islekit {

SharedBoard::SharedBoard(std::size_t slots, BoardMode mode)
    : size_(slots), mode_(mode), slots_(std::make_unique<Slot[]>(slots)) {}

void SharedBoard::publish(std::size_t slot, BoardEntry entry) {
    require(slot < size_, "board: slot out of range");
    require(entry.model != nullptr, "board: cannot publish an empty model");
    std::lock_guard lock(slots_[slot].mutex);
    if (mode_ == BoardMode::Live)
        slots_[slot].visible = std::move(entry);
    else
        slots_[slot].pending = std::move(entry);
}

std::optional<BoardEntry> SharedBoard::read(std::size_t slot) const {
    require(slot < size_, "board: slot out of range");
    std::lock_guard lock(slots_[slot].mutex);
    return slots_[slot].visible;
}

BoardEntry SharedBoard::require_entry(std::size_t slot) const {
    auto entry = read(slot);
    if (!entry) throw BoardStale("board slot " + std::to_string(slot) + " has no published model");
    return *std::move(entry);
}

void SharedBoard::commit() {
    if (mode_ == BoardMode::Live) return;
    for (std::size_t i = 0; i < size_; ++i) {
        std::lock_guard lock(slots_[i].mutex);
        if (slots_[i].pending) {
            slots_[i].visible = std::move(slots_[i].pending);
            slots_[i].pending.reset();
        }
    }
}

bool SharedBoard::fully_populated() const {
    for (std::size_t i = 0; i < size_; ++i)
        if (!read(i)) return false;
    return true;
}

std::vector<BoardEntry> SharedBoard::read_all() const {
    std::vector<BoardEntry> out;
    out.reserve(size_);
    for (std::size_t i = 0; i < size_; ++i) out.push_back(require_entry(i));
    return out;
}

}  // namespace islekit
