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

#include <doctest.h>

#include <algorithm>
#include <set>

#include "nfold/graver.hpp"
#include "nfold/models.hpp"
#include "nfold/oracle.hpp"
#include "support.hpp"

using namespace nfold;

TEST_SUITE("models") {

TEST_CASE("universal bimatrix") {
    auto a2 = universal_bimatrix(2);
    CHECK(a2.a1 == IntegerMatrix::identity(6));
    CHECK(a2.a2 == IntegerMatrix::from_rows({{1, 0, 0, 1, 0, 0},
                                             {0, 1, 0, 0, 1, 0},
                                             {0, 0, 1, 0, 0, 1},
                                             {1, 1, 1, 0, 0, 0},
                                             {0, 0, 0, 1, 1, 1}}));
    auto a3 = universal_bimatrix(3);
    CHECK(a3.a2 == IntegerMatrix::from_rows({{1, 0, 0, 1, 0, 0, 1, 0, 0},
                                             {0, 1, 0, 0, 1, 0, 0, 1, 0},
                                             {0, 0, 1, 0, 0, 1, 0, 0, 1},
                                             {1, 1, 1, 0, 0, 0, 0, 0, 0},
                                             {0, 0, 0, 1, 1, 1, 0, 0, 0},
                                             {0, 0, 0, 0, 0, 0, 1, 1, 1}}));
    auto a1 = universal_bimatrix(1);
    CHECK(a1.a2 == IntegerMatrix::from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}}));
    // The (1 1 1) block folded twice is the same incidence matrix.
    Bimatrix block{IntegerMatrix::identity(3), IntegerMatrix::from_rows({{1, 1, 1}})};
    CHECK(n_fold_product(block, 2) == a2.a2);
}

TEST_CASE("transportation: fully determined instance") {
    TransportationInstance t;
    t.l = t.m = t.n = 1;
    t.supply = {{3}};
    t.demand = {{3}};
    t.capacity = {{5}};
    t.cost = {{PiecewiseFunction{{}, {2}, {1}}}};
    auto model = transportation_to_nfold(t);
    CHECK(model.instance.dim() == 2);
    auto r = Solver().solve(model.instance);
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(r.objective_value == 7);
    auto flow = model.decode(*r.point);
    CHECK(flow[0][0] == IntVector{3});
    CHECK(routing_cost(t, flow) == 7);
}

TEST_CASE("transportation encoding") {
    testing::Rng rng(47);
    for (int trial = 0; trial < 10; ++trial) {
        auto t = testing::random_transportation(rng);
        auto model = transportation_to_nfold(t);
        const auto& inst = model.instance;
        CHECK(inst.n == t.n);
        CHECK(inst.bimatrix.t() == t.m * (t.l + 1));
        CHECK(inst.bimatrix.r() == t.m * t.l);
        CHECK(inst.bimatrix.s() == t.l + t.m);
        std::set<std::size_t> seen;
        for (std::size_t i = 0; i < t.m; ++i)
            for (std::size_t j = 0; j < t.n; ++j)
                for (std::size_t k = 0; k <= t.l; ++k) {
                    const std::size_t idx = model.index(i, j, k);
                    CHECK(idx < inst.dim());
                    seen.insert(idx);
                    CHECK(inst.l[idx] == 0);
                    CHECK(inst.u[idx] == t.capacity[i][j]);
                }
        CHECK(seen.size() == inst.dim());
    }
}

TEST_CASE("transportation validation") {
    TransportationInstance t;
    t.l = t.m = t.n = 1;
    t.supply = {{3}};
    t.demand = {{3}};
    t.capacity = {{-1}};
    t.cost = {{PiecewiseFunction{{}, {1}, {0}}}};
    CHECK_THROWS_AS(t.validate(), InputError);
    t.capacity = {{1}};
    t.supply = {{3, 1}};
    CHECK_THROWS_AS(t.validate(), InputError);
}

TEST_CASE("table margins") {
    Table table{{{1, 0}, {2, 1}}, {{0, 3}, {1, 1}}};
    auto t = TableInstance::from_table(table);
    CHECK(t.n == 2);
    CHECK(t.jk == std::vector<IntVector>{{1, 3}, {3, 2}});
    CHECK(t.ik == std::vector<IntVector>{{3, 1}, {1, 4}});
    CHECK(t.ij == std::vector<IntVector>{{1, 3}, {3, 2}});
    CHECK(t.max_margin() == 4);
    CHECK_NOTHROW(t.validate());
    t.ij[0][0] += 1;
    CHECK_THROWS_AS(t.validate(), InputError);
    t.ij[0][0] -= 2;
    CHECK_THROWS_AS(t.validate(), InputError);
}

TEST_CASE("table model") {
    Table table{{{1, 0, 2}, {2, 1, 0}, {0, 0, 1}}, {{0, 3, 1}, {1, 1, 0}, {2, 0, 0}}};
    auto t = TableInstance::from_table(table);
    auto model = table_to_nfold(t);
    CHECK(model.instance.n == 2);
    CHECK(model.instance.bimatrix == universal_bimatrix(3));
    IntVector x(model.instance.dim());
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t k = 0; k < 3; ++k) x[model.index({i, j, k})] = table[i][j][k];
    CHECK(model.instance.is_feasible(x));
    CHECK(model.decode(x) == table);
}

TEST_CASE("entry bounds on a small table") {
    Table table{{{1, 2}, {0, 1}}, {{2, 0}, {1, 1}}};
    auto t = TableInstance::from_table(table);
    Solver solver;
    auto tables = oracle::enumerate_tables(t);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k) {
                auto eb = entry_bounds(solver, t, {i, j, k});
                REQUIRE(eb.feasible);
                std::vector<Int> values;
                for (const auto& tab : tables) values.push_back(tab[i][j][k]);
                CHECK(eb.min == *std::min_element(values.begin(), values.end()));
                CHECK(eb.max == *std::max_element(values.begin(), values.end()));
                CHECK(eb.min_table[i][j][k] == eb.min);
                CHECK(eb.max_table[i][j][k] == eb.max);
                CHECK(TableInstance::from_table(eb.min_table).ij == t.ij);
                std::sort(values.begin(), values.end());
                values.erase(std::unique(values.begin(), values.end()), values.end());
                CHECK(entry_value_range(solver, t, {i, j, k}) == values);
            }
}

TEST_CASE("margins without a table") {
    // Consistent grand totals, but no 2x2x2 table has these margins.
    TableInstance t;
    t.n = t.p = t.q = 2;
    t.jk = {{1, 0}, {0, 1}};
    t.ik = {{0, 1}, {1, 0}};
    t.ij = {{1, 0}, {0, 1}};
    CHECK_NOTHROW(t.validate());
    CHECK(oracle::enumerate_tables(t).empty());
    Solver solver;
    CHECK_FALSE(entry_bounds(solver, t, {0, 0, 0}).feasible);
    CHECK(entry_value_range(solver, t, {0, 0, 0}).empty());
}

}
