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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nfold/graver.hpp"
#include "nfold/integer.hpp"

namespace nfold {

// Hashed set of equal-length integer vectors stored back to back. Indices
// are assigned in insertion order and never change.
class VectorSet {
  public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    explicit VectorSet(std::size_t dim = 0);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return size_; }

    std::span<const Int> at(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }

    std::size_t find(std::span<const Int> v) const;
    // Returns {index, inserted}.
    std::pair<std::size_t, bool> insert(std::span<const Int> v);

  private:
    static std::uint64_t hash(std::span<const Int> v);
    void grow();

    std::size_t dim_;
    std::size_t size_ = 0;
    std::vector<Int> coords_;
    std::vector<std::uint32_t> slots_;  // 0 = empty, else index + 1
};

// The finite set of DP states: every sum of at most `degree` elements of
// G(A2). States are kept in lexicographic order and addressed by index.
class StateSpace {
  public:
    StateSpace(std::size_t dim, std::vector<IntVector> sorted_states, Int degree, bool saturated,
               bool exact);

    std::size_t dim() const noexcept { return set_.dim(); }
    std::size_t size() const noexcept { return set_.size(); }
    Int degree() const noexcept { return degree_; }
    // The sumset stopped growing before `degree` summands.
    bool saturated() const noexcept { return saturated_; }
    // The set equals Z(A) for the bimatrix it was built for.
    bool exact() const noexcept { return exact_; }

    std::span<const Int> state(std::size_t i) const { return set_.at(i); }
    std::size_t index_of(std::span<const Int> v) const { return set_.find(v); }
    bool contains(std::span<const Int> v) const { return set_.find(v) != VectorSet::npos; }
    std::size_t zero_index() const noexcept { return zero_index_; }

    std::vector<IntVector> states() const;

  private:
    VectorSet set_;
    Int degree_;
    bool saturated_;
    bool exact_;
    std::size_t zero_index_ = 0;
};

// Read-only constant-time membership queries against a StateSpace. The
// space must outlive the view.
class MembershipIndex {
  public:
    explicit MembershipIndex(const StateSpace& z) : z_(&z) {}
    bool contains(std::span<const Int> v) const { return z_->contains(v); }
    std::size_t index_of(std::span<const Int> v) const { return z_->index_of(v); }

  private:
    const StateSpace* z_;
};

struct TerminalStates {
    std::vector<std::size_t> indices;  // ascending
    std::vector<char> mask;            // mask[i] != 0 iff state i is terminal
};

struct StateSpaceBudget {
    std::size_t max_states = 4000000;
};

// Sums of at most `degree` elements of g, each with the least number of
// summands that produces it, in discovery order.
struct GradedSumset {
    std::vector<IntVector> states;
    std::vector<Int> depth;
    bool saturated = false;
};

GradedSumset graded_sumset(const GraverBasis& g, Int degree, const StateSpaceBudget& budget = {});

// Iterated sumset Z_k = Z_{k-1} + (G ∪ {0}), k = 1..degree, stopping early
// once a round adds nothing. `known_complexity`, when given, marks the result
// exact if degree >= it.
StateSpace build_state_space(const GraverBasis& g2, Int degree,
                             std::optional<Int> known_complexity = std::nullopt,
                             const StateSpaceBudget& budget = {});

// States z with a1 * z = 0.
TerminalStates terminal_states(const StateSpace& z, const IntegerMatrix& a1);

inline MembershipIndex step_membership_index(const StateSpace& z) { return MembershipIndex(z); }

}  // namespace nfold
