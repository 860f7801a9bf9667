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

#include <limits>

#include "nfold/oracle.hpp"
#include "nfold/solver.hpp"
#include "support.hpp"

using namespace nfold;

namespace {

NFoldInstance small_instance() {
    NFoldInstance inst;
    inst.bimatrix = {IntegerMatrix::from_rows({{1, 1}}), IntegerMatrix::from_rows({{1, -1}})};
    inst.n = 3;
    inst.b = {6, 0, 0, 0};
    inst.l.assign(6, 0);
    inst.u.assign(6, 3);
    inst.objective = LinearObjective{{1, 2, -1, 3, 0, 1}};
    return inst;
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("validation") {
    auto inst = small_instance();
    CHECK_NOTHROW(inst.validate());
    inst.b.pop_back();
    CHECK_THROWS_AS(inst.validate(), InputError);
    inst = small_instance();
    inst.l[2] = 4;
    CHECK_THROWS_AS(inst.validate(), InputError);
    inst = small_instance();
    inst.objective = LinearObjective{{1, 2}};
    CHECK_THROWS_AS(inst.validate(), InputError);
}

TEST_CASE("small instance reaches the oracle optimum") {
    auto inst = small_instance();
    Solver solver;
    auto r = solver.solve(inst);
    auto o = oracle::brute_force_solve(inst);
    REQUIRE(o.feasible);
    CHECK(r.status == SolveStatus::Optimal);
    CHECK(r.objective_value == o.value);
    REQUIRE(r.point);
    CHECK(inst.is_feasible(*r.point));
    CHECK(testing::strictly_decreasing(r, std::numeric_limits<Int>::max()));
    CHECK(solver.graver_complexity_for(inst) == 2);
}

TEST_CASE("infeasible instance") {
    NFoldInstance inst;
    inst.bimatrix = {IntegerMatrix::from_rows({{1}}), IntegerMatrix::from_rows({{1}})};
    inst.n = 1;
    inst.b = {1, 2};
    inst.l = {0};
    inst.u = {5};
    inst.objective = LinearObjective{{1}};
    Solver solver;
    auto r = solver.solve(inst);
    CHECK(r.status == SolveStatus::Infeasible);
    CHECK_FALSE(r.point);
    CHECK_FALSE(solver.find_feasible(inst).point);
}

TEST_CASE("zero objective returns a feasible point of value 0") {
    auto inst = small_instance();
    inst.objective = LinearObjective{IntVector(6, 0)};
    auto r = Solver().solve(inst);
    CHECK(r.status == SolveStatus::Optimal);
    CHECK(r.objective_value == 0);
    CHECK(r.iterations == 0);
}

TEST_CASE("feasibility ignores the objective and is memoized on the constraints") {
    auto inst = small_instance();
    Solver solver;
    auto first = solver.find_feasible(inst);
    REQUIRE(first.point);
    CHECK(inst.is_feasible(*first.point));
    inst.objective = LinearObjective{IntVector(6, 7)};
    auto again = solver.find_feasible(inst);
    CHECK(again.point == first.point);
    inst.u[0] = 0;
    inst.u[1] = 0;
    auto narrowed = solver.find_feasible(inst);
    REQUIRE(narrowed.point);
    CHECK(inst.is_feasible(*narrowed.point));
}

TEST_CASE("augment_to_optimal rejects infeasible starts") {
    auto inst = small_instance();
    Solver solver;
    CHECK_THROWS_AS(solver.augment_to_optimal(inst, IntVector(6, 0)), InputError);
    auto r = solver.augment_to_optimal(inst, IntVector{1, 1, 1, 1, 1, 1});
    CHECK(r.objective_value == oracle::brute_force_solve(inst).value);
}

TEST_CASE("certification") {
    auto inst = small_instance();
    Solver solver;
    IntVector start{1, 1, 1, 1, 1, 1};
    auto c = solver.certify_optimal(inst, start);
    REQUIRE_FALSE(c.optimal());
    CHECK(c.delta < 0);
    IntVector y = added(start, c.step);
    CHECK(inst.is_feasible(y));
    CHECK(evaluate_objective(inst.objective, y) - evaluate_objective(inst.objective, start) == c.delta);
    auto r = solver.solve(inst);
    CHECK(solver.certify_optimal(inst, *r.point).optimal());
    // Through per-brick values only.
    auto w = std::get<LinearObjective>(inst.objective).w;
    BrickEvaluator f = [&](std::size_t i, std::span<const Int> xi) { return w[2 * i] * xi[0] + w[2 * i + 1] * xi[1]; };
    CHECK(solver.certify_optimal(inst, *r.point, f).optimal());
    CHECK_FALSE(solver.certify_optimal(inst, start, f).optimal());
}

TEST_CASE("reports are identical across thread counts") {
    testing::Rng rng(41);
    for (int trial = 0; trial < 30; ++trial) {
        auto inst = testing::random_instance(rng, trial % 2 ? 2 : 1);
        SolveOptions one, many;
        many.threads = 4;
        CHECK(Solver(one).solve(inst) == Solver(many).solve(inst));
    }
}

TEST_CASE("paired and folded feasibility programs agree") {
    testing::Rng rng(43);
    // The paired program has 2(r + s) extra columns per brick, so only the
    // smallest shapes keep its Graver complexity cheap.
    for (int trial = 0; trial < 30; ++trial) {
        NFoldInstance inst;
        inst.bimatrix = {testing::random_matrix(rng, 1, 2, -2, 2), testing::random_matrix(rng, 1, 2, -2, 2)};
        inst.n = rng.index(1, 3);
        inst.l.assign(2 * inst.n, 0);
        inst.u.assign(2 * inst.n, 2);
        inst.b.resize(1 + inst.n);
        for (auto& v : inst.b) v = rng.uniform(-2, 2);
        inst.objective = LinearObjective{IntVector(2 * inst.n, 0)};
        SolveOptions paired;
        paired.auxiliary = AuxiliaryForm::Paired;
        auto a = Solver(paired).find_feasible(inst);
        auto b = Solver().find_feasible(inst);
        CHECK(a.point.has_value() == b.point.has_value());
        if (a.point) CHECK(inst.is_feasible(*a.point));
    }
}

TEST_CASE("auxiliary program shape") {
    auto inst = small_instance();
    auto aux = auxiliary_program(inst, AuxiliaryForm::Folded);
    CHECK(aux.instance.is_feasible(aux.start));
    CHECK(aux.original_n == 3);
    CHECK(aux.original_t == 2);
    CHECK(aux.x_part(aux.start).size() == inst.dim());
}

TEST_CASE("approximate mode is heuristic unless certified") {
    auto inst = small_instance();
    inst.degree = 1;
    auto r = Solver().solve(inst);
    CHECK(r.status == SolveStatus::HeuristicFeasible);
    CHECK_FALSE(r.exact);
    REQUIRE(r.point);
    CHECK(inst.is_feasible(*r.point));
    SolveOptions o;
    o.certify_exact = true;
    auto c = Solver(o).solve(inst);
    CHECK((c.status == SolveStatus::Optimal) == (c.objective_value == oracle::brute_force_solve(inst).value));
}

TEST_CASE("iteration cap") {
    auto inst = small_instance();
    Solver solver;
    CHECK(solver.iteration_cap(inst) > 0);
    SolveOptions o;
    o.iteration_cap = 0;
    IntVector start{3, 3, 0, 0, 0, 0};
    REQUIRE_FALSE(Solver().certify_optimal(inst, start).optimal());
    CHECK_THROWS_AS(Solver(o).augment_to_optimal(inst, start), ResourceLimitError);
}

TEST_CASE("graver complexity override is used") {
    auto inst = small_instance();
    inst.graver_complexity_override = 5;
    CHECK(Solver().graver_complexity_for(inst) == 5);
    CHECK(Solver().solve(inst).objective_value == oracle::brute_force_solve(inst).value);
}

}
