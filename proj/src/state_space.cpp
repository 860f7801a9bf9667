// Copyright 2026 The nfold Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#include "nfold/state_space.hpp"

#include <algorithm>
#include <cstring>

namespace nfold {

VectorSet::VectorSet(std::size_t dim) : dim_(dim), slots_(16, 0) {}

std::uint64_t VectorSet::hash(std::span<const Int> v) {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (Int x : v) {
        h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h *= 0xff51afd7ed558ccdULL;
    }
    return h ^ (h >> 29);
}

std::size_t VectorSet::find(std::span<const Int> v) const {
    const std::size_t mask = slots_.size() - 1;
    for (std::size_t pos = hash(v) & mask;; pos = (pos + 1) & mask) {
        std::uint32_t slot = slots_[pos];
        if (slot == 0) return npos;
        std::size_t idx = slot - 1;
        if (std::equal(v.begin(), v.end(), coords_.begin() + static_cast<std::ptrdiff_t>(idx * dim_)))
            return idx;
    }
}

std::pair<std::size_t, bool> VectorSet::insert(std::span<const Int> v) {
    if (std::size_t idx = find(v); idx != npos) return {idx, false};
    if ((size_ + 1) * 2 > slots_.size()) grow();
    coords_.insert(coords_.end(), v.begin(), v.end());
    const std::size_t mask = slots_.size() - 1;
    std::size_t pos = hash(v) & mask;
    while (slots_[pos] != 0) pos = (pos + 1) & mask;
    slots_[pos] = static_cast<std::uint32_t>(size_ + 1);
    return {size_++, true};
}

void VectorSet::grow() {
    std::vector<std::uint32_t> next(slots_.size() * 2, 0);
    const std::size_t mask = next.size() - 1;
    for (std::size_t i = 0; i < size_; ++i) {
        std::size_t pos = hash(at(i)) & mask;
        while (next[pos] != 0) pos = (pos + 1) & mask;
        next[pos] = static_cast<std::uint32_t>(i + 1);
    }
    slots_.swap(next);
}

StateSpace::StateSpace(std::size_t dim, std::vector<IntVector> sorted_states, Int degree,
                       bool saturated, bool exact)
    : set_(dim), degree_(degree), saturated_(saturated), exact_(exact) {
    for (const auto& s : sorted_states) set_.insert(s);
    IntVector zero(dim, 0);
    zero_index_ = set_.find(zero);
    if (zero_index_ == VectorSet::npos) throw InputError("state space must contain the zero vector");
}

std::vector<IntVector> StateSpace::states() const {
    std::vector<IntVector> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) out.emplace_back(state(i).begin(), state(i).end());
    return out;
}

GradedSumset graded_sumset(const GraverBasis& g, Int degree, const StateSpaceBudget& budget) {
    if (degree < 0) throw InputError("sumset degree must be >= 0");
    const std::size_t dim = g.dim;
    VectorSet all(dim);
    all.insert(IntVector(dim, 0));
    GradedSumset out;
    out.depth.push_back(0);
    std::size_t frontier_begin = 0;
    out.saturated = g.empty();
    IntVector sum(dim);
    for (Int round = 0; round < degree && !out.saturated; ++round) {
        const std::size_t frontier_end = all.size();
        // Sums that already existed before this round were expanded earlier,
        // so only the newest layer needs extending.
        for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
            for (const auto& e : g.elements) {
                auto base = all.at(i);
                for (std::size_t k = 0; k < dim; ++k) sum[k] = checked_add(base[k], e[k]);
                if (all.insert(sum).second) out.depth.push_back(round + 1);
            }
            if (all.size() > budget.max_states)
                throw ResourceLimitError("max_states", "--max-states",
                                         "state space exceeded " + std::to_string(budget.max_states) +
                                             " vectors at degree " + std::to_string(round + 1));
        }
        frontier_begin = frontier_end;
        if (all.size() == frontier_end) out.saturated = true;
    }
    out.states.reserve(all.size());
    for (std::size_t i = 0; i < all.size(); ++i) out.states.emplace_back(all.at(i).begin(), all.at(i).end());
    return out;
}

StateSpace build_state_space(const GraverBasis& g2, Int degree, std::optional<Int> known_complexity,
                             const StateSpaceBudget& budget) {
    if (degree < 1) throw InputError("state space degree must be >= 1");
    GradedSumset sums = graded_sumset(g2, degree, budget);
    std::sort(sums.states.begin(), sums.states.end());
    bool exact = sums.saturated || (known_complexity && degree >= *known_complexity);
    return StateSpace(g2.dim, std::move(sums.states), degree, sums.saturated, exact);
}

TerminalStates terminal_states(const StateSpace& z, const IntegerMatrix& a1) {
    if (a1.cols() != z.dim())
        throw InputError("A1 has " + std::to_string(a1.cols()) + " columns but states have dimension " +
                         std::to_string(z.dim()));
    TerminalStates out;
    out.mask.assign(z.size(), 0);
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (a1.annihilates(z.state(i))) {
            out.indices.push_back(i);
            out.mask[i] = 1;
        }
    }
    return out;
}

}  // namespace nfold
