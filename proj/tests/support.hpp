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

// Seeded generators shared by the unit and acceptance tests.

#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "nfold/instance.hpp"
#include "nfold/models.hpp"
#include "nfold/solver.hpp"

namespace nfold::testing {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    Int uniform(Int lo, Int hi) { return std::uniform_int_distribution<Int>(lo, hi)(gen_); }
    std::size_t index(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(gen_);
    }
    bool coin() { return uniform(0, 1) == 1; }

  private:
    std::mt19937_64 gen_;
};

inline IntegerMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, Int lo, Int hi) {
    IntegerMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.uniform(lo, hi);
    return m;
}

// Convex, continuous, with `pieces` pieces and breakpoints inside [-3, 3].
inline PiecewiseFunction random_convex(Rng& rng, std::size_t pieces) {
    PiecewiseFunction f;
    std::vector<Int> pool{-2, -1, 0, 1, 2};
    std::shuffle(pool.begin(), pool.end(), std::mt19937_64(rng.uniform(0, 1 << 30)));
    f.breakpoints.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(pieces - 1));
    std::sort(f.breakpoints.begin(), f.breakpoints.end());
    f.slopes.push_back(rng.uniform(-4, 2));
    f.intercepts.push_back(rng.uniform(-3, 3));
    for (std::size_t p = 1; p < pieces; ++p) {
        f.slopes.push_back(f.slopes.back() + rng.uniform(0, 3));
        const Int bp = f.breakpoints[p - 1];
        f.intercepts.push_back(f.intercepts.back() + (f.slopes[p - 1] - f.slopes[p]) * bp);
    }
    return f;
}

// The small regime of the oracle comparisons: r, s <= 2, t <= 3, n <= 4,
// entries in [-2, 2], bounds within [-3, 3], weights in [-5, 5]. Half the
// right-hand sides come from a box point, so both verdicts are common.
inline NFoldInstance random_instance(Rng& rng, std::size_t pieces = 1) {
    const std::size_t r = rng.index(1, 2), s = rng.index(1, 2), t = rng.index(1, 3), n = rng.index(1, 4);
    NFoldInstance inst;
    inst.bimatrix = {random_matrix(rng, r, t, -2, 2), random_matrix(rng, s, t, -2, 2)};
    inst.n = n;
    inst.l.resize(n * t);
    inst.u.resize(n * t);
    for (std::size_t k = 0; k < n * t; ++k) {
        const Int a = rng.uniform(-3, 3), b = rng.uniform(-3, 3);
        inst.l[k] = std::min(a, b);
        inst.u[k] = std::max(a, b);
    }
    IntVector x(n * t);
    for (std::size_t k = 0; k < n * t; ++k) x[k] = rng.uniform(inst.l[k], inst.u[k]);
    inst.b = inst.constraint_lhs(x);
    if (rng.coin()) inst.b[rng.index(0, inst.b.size() - 1)] += rng.uniform(-2, 2);
    if (pieces <= 1) {
        IntVector w(n * t);
        for (auto& v : w) v = rng.uniform(-5, 5);
        inst.objective = LinearObjective{w};
    } else {
        std::vector<PiecewiseTerm> terms;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < t; ++j) terms.push_back({i, j, random_convex(rng, pieces)});
        inst.objective = PiecewiseObjective(n, t, std::move(terms));
    }
    return inst;
}

inline IntVector random_box_point(Rng& rng, const NFoldInstance& inst) {
    IntVector x(inst.dim());
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = rng.uniform(inst.l[k], inst.u[k]);
    return x;
}

// A table drawn entrywise, so its margins are always consistent.
inline TableInstance random_table(Rng& rng, std::size_t n, std::size_t p, std::size_t q, Int max_entry) {
    Table table(n, std::vector<IntVector>(p, IntVector(q)));
    for (auto& slice : table)
        for (auto& row : slice)
            for (auto& v : row) v = rng.uniform(0, max_entry);
    return TableInstance::from_table(table);
}

inline TransportationInstance random_transportation(Rng& rng) {
    TransportationInstance t;
    t.l = rng.index(1, 2);
    t.m = rng.index(1, 2);
    t.n = rng.index(1, 3);
    t.supply.assign(t.m, IntVector(t.l));
    t.demand.assign(t.n, IntVector(t.l));
    for (std::size_t k = 0; k < t.l; ++k) {
        // Equal totals per commodity, otherwise almost every instance is
        // trivially infeasible.
        Int total = rng.uniform(0, 3);
        for (std::size_t i = 0; i < t.m; ++i) t.supply[i][k] = 0;
        for (std::size_t j = 0; j < t.n; ++j) t.demand[j][k] = 0;
        for (Int u = 0; u < total; ++u) {
            t.supply[rng.index(0, t.m - 1)][k] += 1;
            t.demand[rng.index(0, t.n - 1)][k] += 1;
        }
        if (rng.uniform(0, 9) == 0) t.demand[rng.index(0, t.n - 1)][k] += 1;
    }
    t.capacity.assign(t.m, IntVector(t.n));
    t.cost.assign(t.m, std::vector<PiecewiseFunction>(t.n));
    for (std::size_t i = 0; i < t.m; ++i)
        for (std::size_t j = 0; j < t.n; ++j) {
            t.capacity[i][j] = rng.uniform(0, 3);
            PiecewiseFunction f;
            f.slopes = {rng.uniform(0, 3)};
            f.intercepts = {0};
            if (rng.coin()) {
                const Int bp = rng.uniform(1, 2);
                f.breakpoints = {bp};
                f.slopes.push_back(f.slopes[0] + rng.uniform(1, 4));
                f.intercepts.push_back((f.slopes[0] - f.slopes[1]) * bp);
            }
            t.cost[i][j] = f;
        }
    return t;
}

inline bool strictly_decreasing(const SolveReport& r, Int start) {
    Int prev = start;
    for (const auto& e : r.trace) {
        if (e.objective >= prev) return false;
        prev = e.objective;
    }
    return true;
}

}  // namespace nfold::testing
