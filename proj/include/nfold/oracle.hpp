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

// Brute-force reference implementations. Nothing here calls into the Graver,
// state-space, DP or solver code; only the plain data types are shared.

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "nfold/instance.hpp"
#include "nfold/integer.hpp"
#include "nfold/models.hpp"

namespace nfold::oracle {

struct EnumerationBudget {
    std::size_t max_points = 50000000;
    Int max_norm = 3;
};

struct OracleSolution {
    bool feasible = false;
    Int value = 0;
    IntVector point;
};

// Objective value by direct formulas: w.x, or for convex piecewise terms the
// maximum over the affine pieces.
Int objective_value(const NFoldInstance& inst, const IntVector& x);

// Exhaustive search over the box. Bricks are enumerated one at a time and
// partial assignments are merged on equal partial A1 sums, keeping the
// cheapest, so the work is the number of distinct (brick, partial sum)
// pairs rather than the full box product.
OracleSolution brute_force_solve(const NFoldInstance& inst, const EnumerationBudget& budget = {});

// Every feasible point of the instance. Throws when more than
// budget.max_points points are visited.
std::vector<IntVector> enumerate_feasible(const NFoldInstance& inst, const EnumerationBudget& budget = {});

// Kernel vectors with ||.||_inf <= budget.max_norm, filtered to the
// conformally minimal ones. Exact only when the true basis fits the box.
std::vector<IntVector> brute_force_graver(const IntegerMatrix& m, const EnumerationBudget& budget = {});

// Largest number of nonzero bricks over G(A^(n)) for n = 1..n_max, with
// bricks restricted to ||.||_inf <= budget.max_norm. A lower bound on g(A).
Int brute_force_graver_complexity(const Bimatrix& a, std::size_t n_max, const EnumerationBudget& budget = {});

// Every n x p x q table of nonnegative integers with the given 2-margins,
// built slice by slice.
std::vector<Table> enumerate_tables(const TableInstance& t, const EnumerationBudget& budget = {});

// Minimum routing cost over every integer routing that meets supplies and
// demands exactly with each route's total flow within its capacity.
struct TransportationOptimum {
    bool feasible = false;
    Int cost = 0;
};
TransportationOptimum brute_force_transportation(const TransportationInstance& t,
                                                 const EnumerationBudget& budget = {});

}  // namespace nfold::oracle
