#include "frugal/label_store.hpp"

#include <algorithm>
#include <string>

namespace frugal {

LabelStore::LabelStore(Labels truth, Indices budget)
    : truth_(std::move(truth)), budget_(std::move(budget)), allowed_(truth_.size(), false) {
    std::sort(budget_.begin(), budget_.end());
    budget_.erase(std::unique(budget_.begin(), budget_.end()), budget_.end());
    for (auto i : budget_) {
        if (i >= truth_.size()) throw Error(ErrorKind::InvalidInput, "budget index out of range");
        allowed_[i] = true;
    }
}

int LabelStore::read(std::size_t index) {
    if (index >= truth_.size() || !allowed_[index])
        throw Error(ErrorKind::BudgetViolation,
                    "label read outside budget: index " + std::to_string(index));
    std::lock_guard lock(mutex_);
    touched_.insert(index);
    return truth_[index];
}

Labels LabelStore::read(std::span<const std::size_t> indices) {
    Labels out;
    out.reserve(indices.size());
    for (auto i : indices) out.push_back(read(i));
    return out;
}

std::size_t LabelStore::access_count() const {
    std::lock_guard lock(mutex_);
    return touched_.size();
}

} // namespace frugal
