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
#include <vector>

#include "nfold/integer.hpp"

namespace nfold {

// Limits for the completion procedure. Graver bases grow quickly with the
// matrix; exceeding either limit raises ResourceLimitError instead of
// running on.
struct GraverBudget {
    // Working-set size (candidates kept during completion, before filtering).
    std::size_t max_elements = 200000;
    // Largest infinity norm any working vector may reach.
    Int max_norm = Int{1} << 20;
    // Pair-sum reductions performed by the completion loop.
    std::size_t max_pending = 4000000;
};

// The conformally minimal nonzero kernel vectors of a matrix, in
// lexicographic order.
struct GraverBasis {
    std::size_t dim = 0;
    std::vector<IntVector> elements;

    std::size_t size() const noexcept { return elements.size(); }
    bool empty() const noexcept { return elements.empty(); }
    bool contains(const IntVector& v) const;

    // Elements as the columns of a dim x size() matrix.
    IntegerMatrix as_columns() const;

    friend bool operator==(const GraverBasis&, const GraverBasis&) = default;
};

struct GraverComplexity {
    Int value = 0;
};

// A basis of the integer lattice ker(m) ∩ Z^cols, via unimodular column
// operations. Empty when the kernel is trivial.
std::vector<IntVector> kernel_lattice_basis(const IntegerMatrix& m);

// Completion: start from ±(lattice basis), repeatedly reduce pair sums to
// conformal normal form against the working set until nothing new appears,
// then keep the ⊑-minimal vectors.
GraverBasis graver_basis(const IntegerMatrix& m, const GraverBudget& budget = {});

// (r + n s) x (n t): A1 repeated across the top block row, A2 on the
// block diagonal.
IntegerMatrix n_fold_product(const Bimatrix& a, std::size_t n);

// max ||v||_1 over v in G(A1 * G2), where G2 holds G(A2) as columns.
// Zero when G(A2) is empty.
GraverComplexity graver_complexity(const Bimatrix& a, const GraverBudget& budget = {});

}  // namespace nfold
