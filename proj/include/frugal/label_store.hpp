#pragma once

#include <mutex>
#include <set>
#include <span>

#include "frugal/matrix.hpp"

namespace frugal {

/// Wraps true labels behind an access-counting gate. Only indices inside the
/// budget may be read; anything else throws BudgetViolation. Repeat reads of
/// the same index count once.
class LabelStore {
public:
    LabelStore(Labels truth, Indices budget);

    int read(std::size_t index);
    Labels read(std::span<const std::size_t> indices);

    std::size_t access_count() const;
    std::size_t budget_size() const noexcept { return budget_.size(); }
    const Indices& budget() const noexcept { return budget_; }
    std::size_t size() const noexcept { return truth_.size(); }

private:
    Labels truth_;
    Indices budget_;
    std::vector<bool> allowed_;
    mutable std::mutex mutex_;
    std::set<std::size_t> touched_;
};

} // namespace frugal
