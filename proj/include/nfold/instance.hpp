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
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "nfold/integer.hpp"

namespace nfold {

// Convex piecewise-affine function of one integer variable. With k pieces
// there are k-1 interior breakpoints; piece p is slopes[p]*v + intercepts[p]
// on [breakpoints[p-1], breakpoints[p]] (unbounded at the ends).
struct PiecewiseFunction {
    IntVector breakpoints;
    IntVector slopes;
    IntVector intercepts;

    std::size_t pieces() const noexcept { return slopes.size(); }
    // Index of the piece containing v; at a breakpoint the lower piece.
    std::size_t piece_of(Int v) const;
    Int evaluate(Int v) const;
    // Throws InputError unless sorted, convex and continuous.
    void validate() const;

    friend bool operator==(const PiecewiseFunction&, const PiecewiseFunction&) = default;
};

struct PiecewiseTerm {
    std::size_t brick = 0;   // i
    std::size_t coord = 0;   // j
    PiecewiseFunction f;

    friend bool operator==(const PiecewiseTerm&, const PiecewiseTerm&) = default;
};

// Separable objective sum over (i, j) of f^i_j(x^i_j). Coordinates without a
// term contribute zero.
class PiecewiseObjective {
  public:
    static constexpr std::size_t kDefaultMaxPieces = 16;

    PiecewiseObjective() = default;
    PiecewiseObjective(std::size_t n, std::size_t t, std::vector<PiecewiseTerm> terms,
                       std::size_t max_pieces = kDefaultMaxPieces);

    std::size_t n() const noexcept { return n_; }
    std::size_t t() const noexcept { return t_; }
    std::size_t max_pieces() const noexcept { return max_pieces_; }
    const std::vector<PiecewiseTerm>& terms() const noexcept { return terms_; }

    // nullptr when (i, j) has no term.
    const PiecewiseFunction* function(std::size_t brick, std::size_t coord) const;
    Int evaluate_brick(std::size_t brick, std::span<const Int> xi) const;
    Int evaluate(std::span<const Int> x) const;

    friend bool operator==(const PiecewiseObjective& a, const PiecewiseObjective& b) {
        return a.n_ == b.n_ && a.t_ == b.t_ && a.max_pieces_ == b.max_pieces_ && a.terms_ == b.terms_;
    }

  private:
    std::size_t n_ = 0;
    std::size_t t_ = 0;
    std::size_t max_pieces_ = kDefaultMaxPieces;
    std::vector<PiecewiseTerm> terms_;   // sorted by (brick, coord)
    std::vector<std::ptrdiff_t> lookup_; // n*t, index into terms_ or -1
};

struct LinearObjective {
    IntVector w;
    friend bool operator==(const LinearObjective&, const LinearObjective&) = default;
};

using Objective = std::variant<LinearObjective, PiecewiseObjective>;

Int evaluate_objective(const Objective& f, std::span<const Int> x);
Int evaluate_objective_brick(const Objective& f, std::size_t brick, std::size_t t,
                             std::span<const Int> xi);

struct NFoldInstance {
    Bimatrix bimatrix;
    std::size_t n = 1;
    IntVector b;  // r + n s
    IntVector l;  // n t
    IntVector u;  // n t
    Objective objective = LinearObjective{};
    std::optional<Int> graver_complexity_override;
    std::optional<Int> degree;

    std::size_t dim() const noexcept { return n * bimatrix.t(); }

    // Throws InputError describing the first inconsistency found.
    void validate() const;

    // A^(n) x, computed brick by brick without forming the product matrix.
    IntVector constraint_lhs(std::span<const Int> x) const;
    bool is_feasible(std::span<const Int> x) const;
    // Sum of bit lengths of every number in the instance data.
    Int binary_length() const;

    friend bool operator==(const NFoldInstance&, const NFoldInstance&) = default;
};

}  // namespace nfold
