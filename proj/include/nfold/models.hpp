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
#include <vector>

#include "nfold/instance.hpp"
#include "nfold/integer.hpp"
#include "nfold/solver.hpp"

namespace nfold {

// A1 = I_{3m}; A2 is the incidence matrix of K_{3,m}: column 3c + k is the
// edge (k, c), rows 0..2 are the three left vertices and rows 3..3+m-1 the
// m right vertices.
Bimatrix universal_bimatrix(std::size_t m);

// ---------------------------------------------------------------------------
// Multicommodity transportation.

struct TransportationInstance {
    std::size_t l = 0;  // commodities
    std::size_t m = 0;  // suppliers
    std::size_t n = 0;  // consumers
    std::vector<IntVector> supply;    // m x l
    std::vector<IntVector> demand;    // n x l
    std::vector<IntVector> capacity;  // m x n, u_{i,j}
    // m x n convex costs of the total flow on route (i, j).
    std::vector<std::vector<PiecewiseFunction>> cost;

    void validate() const;
};

// flow[i][j][k]: units of commodity k sent from supplier i to consumer j.
using Routing = std::vector<std::vector<IntVector>>;

struct TransportationModel {
    NFoldInstance instance;
    std::size_t l = 0, m = 0, n = 0;

    // Position of x^j_{i,k} (k < l) or y^j_i (k == l) in the n-fold point.
    std::size_t index(std::size_t i, std::size_t j, std::size_t k) const;
    Routing decode(std::span<const Int> x) const;
};

struct ModelLimits {
    std::size_t max_variables = std::size_t{1} << 22;
};

// One brick per consumer j, laid out (x^j_{1,1..l}, y^j_1, ..., x^j_{m,1..l},
// y^j_m). A1 rows (i, k) carry the supplies; A2 rows are first the l
// demands of consumer j, then the m route totals y^j_i - sum_k x^j_{i,k} = 0.
TransportationModel transportation_to_nfold(const TransportationInstance& t, const ModelLimits& limits = {});

// Sum of cost[i][j] over the total flow of each route.
Int routing_cost(const TransportationInstance& t, const Routing& flow);

// ---------------------------------------------------------------------------
// Three-way n x p x q tables with all 2-margins.

struct TableInstance {
    std::size_t n = 0, p = 0, q = 0;
    std::vector<IntVector> jk;  // p x q: sum over i
    std::vector<IntVector> ik;  // n x q: sum over j
    std::vector<IntVector> ij;  // n x p: sum over k

    // Shapes, nonnegativity and equal grand totals.
    void validate() const;
    Int max_margin() const;
    // The margins of a full table table[i][j][k].
    static TableInstance from_table(const std::vector<std::vector<IntVector>>& table);
};

struct Cell {
    std::size_t i = 0, j = 0, k = 0;
};

using Table = std::vector<std::vector<IntVector>>;  // n x p x q

struct TableModel {
    NFoldInstance instance;  // linear objective, all zero
    std::size_t n = 0, p = 0, q = 0;

    // Brick i holds the slice x_{i,.,.} with (j, k) at column j q + k.
    std::size_t index(const Cell& c) const { return (c.i * p + c.j) * q + c.k; }
    Table decode(std::span<const Int> x) const;
};

// A1 = I_{pq} carries the margins v_{*,j,k}. A2 is the incidence matrix of
// K_{q,p} laid out like universal_bimatrix: q rows sum over j (margins
// v_{i,*,k}), then p rows sum over k (margins v_{i,j,*}). For q = 3 the
// bimatrix is universal_bimatrix(p). Entries range over [0, max margin].
TableModel table_to_nfold(const TableInstance& t, const ModelLimits& limits = {});

struct EntryBounds {
    bool feasible = false;
    Int min = 0, max = 0;
    Table min_table, max_table;
};

// Minimizes and maximizes the entry at `cell` over all tables with the
// given margins.
EntryBounds entry_bounds(Solver& solver, const TableInstance& t, const Cell& cell);

// Every value the entry takes over tables with these margins, ascending.
// Empty when the margins admit no table.
std::vector<Int> entry_value_range(Solver& solver, const TableInstance& t, const Cell& cell);

}  // namespace nfold
