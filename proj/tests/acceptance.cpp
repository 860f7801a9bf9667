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

// Acceptance criteria 1-12. One line per criterion; exit status 1 if any
// criterion fails. `nfold_acceptance 5 6` runs a subset.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nfold/cli.hpp"
#include "nfold/dp_engine.hpp"
#include "nfold/graver.hpp"
#include "nfold/models.hpp"
#include "nfold/oracle.hpp"
#include "nfold/solver.hpp"
#include "nfold/state_space.hpp"
#include "support.hpp"

using namespace nfold;
using testing::Rng;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
    std::vector<std::string> failures;

    void fail(const std::string& why) {
        pass = false;
        if (failures.size() < 5) failures.push_back(why);
    }
    void expect(bool ok, const std::string& why) {
        if (!ok) fail(why);
    }
};

// Criterion 12 collects over the solves of criteria 5-10.
struct Descent {
    std::size_t solves = 0;
    std::size_t violations = 0;
    std::size_t capped = 0;

    void record(const SolveReport& r) {
        ++solves;
        for (std::size_t k = 1; k < r.trace.size(); ++k)
            if (r.trace[k].objective >= r.trace[k - 1].objective) {
                ++violations;
                break;
            }
    }
} descent;

std::string show(const IntVector& v) {
    std::ostringstream os;
    os << "(";
    for (std::size_t k = 0; k < v.size(); ++k) os << (k ? "," : "") << v[k];
    os << ")";
    return os.str();
}

// Runs solve, counting descent and cap failures.
std::optional<SolveReport> tracked_solve(Solver& solver, const NFoldInstance& inst, Outcome& out,
                                         const std::string& label) {
    try {
        SolveReport r = solver.solve(inst);
        descent.record(r);
        return r;
    } catch (const ResourceLimitError& e) {
        if (e.limit() == "iteration_cap") ++descent.capped;
        out.fail(label + ": " + e.what());
    } catch (const std::exception& e) {
        out.fail(label + ": " + e.what());
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------

Outcome ac1() {
    Outcome out;
    auto g = graver_basis(IntegerMatrix::from_rows({{1, 2, 1}}));
    const std::vector<IntVector> listed{{2, -1, 0}, {-2, 1, 0}, {0, -1, 2}, {0, 1, -2},
                                        {1, 0, -1}, {-1, 0, 1}, {1, -1, 1}, {-1, 1, -1}};
    out.expect(std::set<IntVector>(g.elements.begin(), g.elements.end()) ==
                   std::set<IntVector>(listed.begin(), listed.end()) && g.size() == 8,
               "basis differs from the eight listed vectors");
    out.detail = std::to_string(g.size()) + " vectors";
    return out;
}

Outcome ac2() {
    Outcome out;
    const IntegerMatrix a2 = universal_bimatrix(3).a2;
    auto g = graver_basis(a2);
    out.expect(g.size() == 30, "expected 30 vectors, got " + std::to_string(g.size()));
    std::set<IntVector> all(g.elements.begin(), g.elements.end());
    for (const auto& v : g.elements) {
        out.expect(norm_inf(v) == 1, show(v) + " not in {0,+-1}^9");
        out.expect(all.count(negated(v)) == 1, show(v) + " has no negative");
        out.expect(a2.annihilates(v), show(v) + " not in the kernel");
        // A circuit with alternating signs: every vertex meets the support
        // in either nothing or one +1 and one -1 edge, and the support is
        // connected.
        std::vector<std::size_t> edges;
        for (std::size_t c = 0; c < 9; ++c)
            if (v[c] != 0) edges.push_back(c);
        for (std::size_t row = 0; row < a2.rows(); ++row) {
            int plus = 0, minus = 0;
            for (std::size_t c : edges)
                if (a2(row, c)) (v[c] > 0 ? plus : minus) += 1;
            out.expect(plus == minus && plus <= 1, show(v) + " does not alternate at a vertex");
        }
        std::set<std::size_t> reached{edges.front()};
        for (bool grew = true; grew;) {
            grew = false;
            for (std::size_t c : edges) {
                if (reached.count(c)) continue;
                for (std::size_t d : reached)
                    if (c % 3 == d % 3 || c / 3 == d / 3) {
                        reached.insert(c);
                        grew = true;
                        break;
                    }
            }
        }
        out.expect(reached.size() == edges.size(), show(v) + " is not a single circuit");
    }
    out.detail = std::to_string(g.size()) + " vectors";
    return out;
}

Outcome ac3() {
    Outcome out;
    Solver solver;
    NFoldInstance inst;
    inst.bimatrix = universal_bimatrix(3);
    inst.graver_complexity_override = 9;
    auto z9 = solver.state_space_for(inst);
    inst.degree = 3;
    auto z3 = solver.state_space_for(inst);
    out.expect(z9->size() == 42931, "|Z| = " + std::to_string(z9->size()));
    out.expect(z9->degree() == 9 && z9->exact(), "degree 9 space not marked exact");
    out.expect(z9->contains(IntVector{9, -2, -7, -4, 5, -1, -5, -3, 8}), "(9,-2,-7,-4,5,-1,-5,-3,8) missing");
    out.expect(z3->size() == 811, "|Z_3| = " + std::to_string(z3->size()));
    out.expect(!z3->exact(), "degree 3 space marked exact");
    out.expect(z3->contains(IntVector{-3, 2, 1, 2, -3, 1, 1, 1, -2}), "(-3,2,1,2,-3,1,1,1,-2) missing");
    std::size_t outside = 0;
    for (std::size_t i = 0; i < z3->size(); ++i) outside += !z9->contains(z3->state(i));
    out.expect(outside == 0, std::to_string(outside) + " states of Z_3 not in Z");
    out.detail = "|Z| = " + std::to_string(z9->size()) + ", |Z_3| = " + std::to_string(z3->size());
    return out;
}

Outcome ac4() {
    Outcome out;
    // Hand-picked shapes plus seeded random ones.
    std::vector<Bimatrix> cases{
        {IntegerMatrix::from_rows({{1, 1}}), IntegerMatrix::from_rows({{1, -1}})},
        {IntegerMatrix::from_rows({{1, 0, 0}}), IntegerMatrix::from_rows({{1, 1, 1}})},
        {IntegerMatrix::from_rows({{1, 2}}), IntegerMatrix::from_rows({{1, 1}})},
        {IntegerMatrix::from_rows({{1, 1, 1}}), IntegerMatrix::from_rows({{1, 2, 1}})},
        {IntegerMatrix::from_rows({{2, 1}}), IntegerMatrix::from_rows({{1, -2}})},
        {IntegerMatrix::from_rows({{1, 0, 1}, {0, 1, 1}}), IntegerMatrix::from_rows({{1, 1, 0}})},
    };
    Rng rng(4);
    while (cases.size() < 14) {
        const std::size_t r = rng.index(1, 2), s = rng.index(1, 2), t = rng.index(2, 3);
        if (s >= t) continue;
        cases.push_back({testing::random_matrix(rng, r, t, -2, 2), testing::random_matrix(rng, s, t, -2, 2)});
    }
    std::size_t compared = 0;
    std::ostringstream values;
    for (const auto& a : cases) {
        auto g2 = graver_basis(a.a2);
        Int brick = 1;
        for (const auto& v : g2.elements) brick = std::max(brick, norm_inf(v));
        // Bricks of product Graver elements are conformal sums of G(A2)
        // elements; the box allows twice the largest of those.
        oracle::EnumerationBudget b;
        b.max_norm = 2 * brick;
        b.max_points = 200000000;
        Int v3 = 0, v4 = 0;
        try {
            v3 = oracle::brute_force_graver_complexity(a, 3, b);
            v4 = oracle::brute_force_graver_complexity(a, 4, b);
        } catch (const ResourceLimitError&) {
            continue;
        }
        const Int g = graver_complexity(a).value;
        out.expect(g >= v4, "g = " + std::to_string(g) + " below the brute-force lower bound " + std::to_string(v4));
        if (v3 != v4) continue;
        ++compared;
        values << (compared > 1 ? " " : "") << g;
        out.expect(g == v4, "g = " + std::to_string(g) + ", saturated brute force " + std::to_string(v4));
    }
    out.expect(compared >= 5, "only " + std::to_string(compared) + " saturated cases");
    out.detail = std::to_string(compared) + " saturated bimatrices, g = " + values.str();
    return out;
}

Outcome oracle_equivalence(std::uint64_t seed, bool piecewise) {
    Outcome out;
    Rng rng(seed);
    Solver solver;
    std::size_t feasible = 0, total = 0;
    for (int trial = 0; trial < 120; ++trial) {
        NFoldInstance inst = testing::random_instance(rng, piecewise ? 2 + trial % 2 : 1);
        const std::string label = "instance " + std::to_string(trial);
        auto o = oracle::brute_force_solve(inst);
        auto r = tracked_solve(solver, inst, out, label);
        ++total;
        if (!r) continue;
        feasible += o.feasible;
        if (!o.feasible) {
            out.expect(r->status == SolveStatus::Infeasible, label + ": solver found a point, oracle none");
            continue;
        }
        out.expect(r->status == SolveStatus::Optimal, label + ": status " + to_string(r->status));
        out.expect(r->objective_value == o.value, label + ": value " + std::to_string(r->objective_value) +
                                                      ", oracle " + std::to_string(o.value));
        out.expect(r->point && inst.is_feasible(*r->point) &&
                       oracle::objective_value(inst, *r->point) == r->objective_value,
                   label + ": reported point inconsistent");
    }
    out.detail = std::to_string(total) + " instances, " + std::to_string(feasible) + " feasible";
    return out;
}

Outcome ac5() { return oracle_equivalence(5, false); }
Outcome ac6() { return oracle_equivalence(6, true); }

// (instance, feasible point) pairs for criteria 7 and 8.
struct Pair {
    NFoldInstance inst;
    IntVector x;
};

std::vector<Pair> seeded_pairs(std::uint64_t seed, std::size_t count) {
    Rng rng(seed);
    std::vector<Pair> pairs;
    while (pairs.size() < count) {
        NFoldInstance inst = testing::random_instance(rng, rng.coin() ? 1 : 2);
        auto points = oracle::enumerate_feasible(inst);
        // A single feasible point is trivially optimal; keep a few of those
        // but mostly pairs where a step may exist.
        if (points.empty() || (points.size() == 1 && rng.uniform(0, 9) != 0)) continue;
        pairs.push_back({inst, points[rng.index(0, points.size() - 1)]});
    }
    return pairs;
}

Outcome ac7() {
    Outcome out;
    Solver solver;
    std::size_t done = 0, improving = 0;
    for (const auto& [inst, x] : seeded_pairs(7, 60)) {
        // G(A^(n)) of the product matrix itself, independent of the DP.
        std::vector<IntVector> product;
        try {
            GraverBudget budget;
            budget.max_pending = 2000000;
            product = graver_basis(n_fold_product(inst.bimatrix, inst.n), budget).elements;
        } catch (const ResourceLimitError&) {
            continue;
        }
        Int best = 0;
        const Int f0 = oracle::objective_value(inst, x);
        for (const auto& g : product)
            for (Int gamma = 1;; ++gamma) {
                IntVector y = added(x, scaled(g, gamma));
                bool inside = true;
                for (std::size_t k = 0; k < y.size(); ++k) inside = inside && y[k] >= inst.l[k] && y[k] <= inst.u[k];
                if (!inside) break;
                best = std::min(best, oracle::objective_value(inst, y) - f0);
            }
        auto z = solver.state_space_for(inst);
        auto terminals = terminal_states(*z, inst.bimatrix.a1);
        auto weights = ArcWeightModel::for_objective(inst.objective, inst.bimatrix.t());
        AugmentationProblem p{inst.n, inst.bimatrix.t(), x, inst.l, inst.u, z.get(), &terminals, &weights};
        auto step = graver_best_step(p, std::get_if<PiecewiseObjective>(&inst.objective), 1);
        const Int delta = step ? step->delta : 0;
        out.expect(delta <= best, "delta " + std::to_string(delta) + " worse than the best Graver pair " +
                                      std::to_string(best));
        if (step) {
            IntVector y = added(x, scaled(step->step, step->gamma));
            out.expect(inst.is_feasible(y) && oracle::objective_value(inst, y) - f0 == delta,
                       "Graver-best step inconsistent with its delta");
        }
        // Every prefix sum of every product element lies in the state set.
        const std::size_t t = inst.bimatrix.t();
        for (const auto& g : product) {
            IntVector sum(t, 0);
            for (std::size_t i = 0; i < inst.n; ++i) {
                for (std::size_t j = 0; j < t; ++j) sum[j] += g[i * t + j];
                out.expect(z->contains(sum), "prefix sum " + show(sum) + " outside Z");
            }
        }
        ++done;
        improving += best < 0;
    }
    out.expect(done >= 30, "only " + std::to_string(done) + " pairs");
    out.detail = std::to_string(done) + " pairs, " + std::to_string(improving) + " improvable";
    return out;
}

Outcome ac8() {
    Outcome out;
    Solver solver;
    std::size_t optimal = 0, total = 0;
    for (const auto& [inst, x0] : seeded_pairs(8, 60)) {
        auto o = oracle::brute_force_solve(inst);
        // Also the optimum itself, so both verdicts occur often.
        for (const IntVector& x : {x0, o.point}) {
            ++total;
            Certificate c = solver.certify_optimal(inst, x);
            const bool at_optimum = oracle::objective_value(inst, x) == o.value;
            out.expect(c.optimal() == at_optimum, "verdict " + std::string(c.optimal() ? "Optimal" : "Improvable") +
                                                      " at value " + std::to_string(oracle::objective_value(inst, x)) +
                                                      ", optimum " + std::to_string(o.value));
            if (c.optimal()) {
                ++optimal;
                continue;
            }
            IntVector y = added(x, c.step);
            out.expect(inst.is_feasible(y), "certificate step leaves the feasible set");
            out.expect(oracle::objective_value(inst, y) < oracle::objective_value(inst, x),
                       "certificate step does not improve");
            out.expect(oracle::objective_value(inst, y) - oracle::objective_value(inst, x) == c.delta,
                       "certificate delta inconsistent");
        }
    }
    out.detail = std::to_string(total) + " points, " + std::to_string(optimal) + " optimal";
    return out;
}

Outcome ac9() {
    Outcome out;
    Rng rng(9);
    Solver solver;
    std::size_t feasible = 0, total = 0;
    for (int trial = 0; trial < 120; ++trial) {
        NFoldInstance inst = testing::random_instance(rng);
        const bool expected = oracle::brute_force_solve(inst).feasible;
        ++total;
        try {
            auto f = solver.find_feasible(inst);
            out.expect(f.point.has_value() == expected, "instance " + std::to_string(trial) + ": verdict differs");
            if (f.point) out.expect(inst.is_feasible(*f.point), "instance " + std::to_string(trial) + ": point infeasible");
            feasible += f.point.has_value();
        } catch (const std::exception& e) {
            out.fail("instance " + std::to_string(trial) + ": " + e.what());
        }
    }
    out.detail = std::to_string(total) + " instances, " + std::to_string(feasible) + " feasible";
    return out;
}

Outcome ac10() {
    Outcome out;
    Rng rng(10);
    Solver solver;
    std::size_t tables = 0, cells = 0, infeasible = 0;
    while (tables < 24) {
        const std::size_t n = rng.index(1, 3), p = rng.index(1, 3), q = rng.index(1, 3);
        TableInstance t = testing::random_table(rng, n, p, q, 1);
        if (t.max_margin() > 3) continue;
        // Every third instance shifts one unit around a 2x2 minor of the
        // (i, j) margins. All line sums stay consistent, yet often no table
        // has the new margins.
        if (tables % 3 == 2) {
            if (n < 2 || p < 2) continue;
            const std::size_t i0 = rng.index(0, n - 1), i1 = (i0 + rng.index(1, n - 1)) % n;
            const std::size_t j0 = rng.index(0, p - 1), j1 = (j0 + rng.index(1, p - 1)) % p;
            if (t.ij[i0][j0] == 0 || t.ij[i1][j1] == 0 || t.ij[i0][j1] == 3 || t.ij[i1][j0] == 3) continue;
            t.ij[i0][j0] -= 1;
            t.ij[i1][j1] -= 1;
            t.ij[i0][j1] += 1;
            t.ij[i1][j0] += 1;
        }
        ++tables;
        auto all = oracle::enumerate_tables(t);
        infeasible += all.empty();
        std::vector<Cell> chosen;
        if (n * p * q <= 12) {
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < p; ++j)
                    for (std::size_t k = 0; k < q; ++k) chosen.push_back({i, j, k});
        } else {
            for (int c = 0; c < 3; ++c) chosen.push_back({rng.index(0, n - 1), rng.index(0, p - 1), rng.index(0, q - 1)});
        }
        for (const Cell& c : chosen) {
            ++cells;
            std::set<Int> seen;
            for (const auto& tab : all) seen.insert(tab[c.i][c.j][c.k]);
            const std::string label = "table " + std::to_string(tables) + " cell (" + std::to_string(c.i) + "," +
                                      std::to_string(c.j) + "," + std::to_string(c.k) + ")";
            try {
                EntryBounds eb = entry_bounds(solver, t, c);
                out.expect(eb.feasible == !seen.empty(), label + ": feasibility differs");
                if (eb.feasible && !seen.empty()) {
                    out.expect(eb.min == *seen.begin() && eb.max == *seen.rbegin(),
                               label + ": bounds [" + std::to_string(eb.min) + "," + std::to_string(eb.max) +
                                   "], oracle [" + std::to_string(*seen.begin()) + "," +
                                   std::to_string(*seen.rbegin()) + "]");
                }
                auto range = entry_value_range(solver, t, c);
                out.expect(range == std::vector<Int>(seen.begin(), seen.end()), label + ": value range differs");
            } catch (const std::exception& e) {
                out.fail(label + ": " + e.what());
            }
        }
    }
    std::size_t routings = 0, routable = 0;
    for (int trial = 0; trial < 40; ++trial) {
        TransportationInstance t = testing::random_transportation(rng);
        auto o = oracle::brute_force_transportation(t);
        auto model = transportation_to_nfold(t);
        const std::string label = "transportation " + std::to_string(trial);
        auto r = tracked_solve(solver, model.instance, out, label);
        ++routings;
        if (!r) continue;
        routable += o.feasible;
        out.expect((r->status == SolveStatus::Optimal) == o.feasible, label + ": feasibility differs");
        if (o.feasible && r->point) {
            out.expect(r->objective_value == o.cost, label + ": cost " + std::to_string(r->objective_value) +
                                                         ", oracle " + std::to_string(o.cost));
            out.expect(routing_cost(t, model.decode(*r->point)) == r->objective_value,
                       label + ": decoded routing has another cost");
        }
    }
    out.detail = std::to_string(tables) + " tables (" + std::to_string(infeasible) + " without a table), " +
                 std::to_string(cells) + " cells; " + std::to_string(routings) + " transportation instances, " +
                 std::to_string(routable) + " routable";
    return out;
}

Outcome ac11() {
    Outcome out;
    cli::BenchOptions options;
    options.ns = {50, 100, 200, 400};
    // Best of three runs per size against scheduler noise.
    std::vector<cli::BenchRow> best;
    for (int rep = 0; rep < 3; ++rep) {
        auto report = cli::run_bench(options);
        if (best.empty()) best = report.rows;
        for (std::size_t k = 0; k < best.size(); ++k)
            best[k].per_iteration_ms = std::min(best[k].per_iteration_ms, report.rows[k].per_iteration_ms);
    }
    std::ostringstream detail;
    detail << "ms/iteration";
    for (const auto& row : best) detail << " " << row.n << ":" << row.per_iteration_ms;
    detail << "; iterations";
    for (const auto& row : best) detail << " " << row.n << ":" << row.iterations;
    for (std::size_t k = 1; k < best.size(); ++k) {
        const double ratio = best[k].per_iteration_ms / best[k - 1].per_iteration_ms;
        out.expect(ratio <= 4.0, "per-iteration time grew by " + std::to_string(ratio) + " from n = " +
                                     std::to_string(best[k - 1].n));
    }
    // Iterations per unit n stay within a factor 3 of the smallest run's.
    const double base = std::max<double>(1, static_cast<double>(best[0].iterations)) / static_cast<double>(best[0].n);
    for (const auto& row : best)
        out.expect(static_cast<double>(row.iterations) <= 3 * base * static_cast<double>(row.n),
                   std::to_string(row.iterations) + " iterations at n = " + std::to_string(row.n));
    out.detail = detail.str();
    return out;
}

Outcome ac12() {
    Outcome out;
    out.expect(descent.solves > 0, "no solves recorded; run criteria 5, 6 and 10 first");
    out.expect(descent.violations == 0, std::to_string(descent.violations) + " traces not strictly decreasing");
    out.expect(descent.capped == 0, std::to_string(descent.capped) + " solves hit the iteration cap");
    out.detail = std::to_string(descent.solves) + " solves checked";
    return out;
}

struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {1, "Graver basis of (1 2 1)", 1, ac1},
        {2, "K33 circuits", 10, ac2},
        {3, "state-space counts", 120, ac3},
        {4, "Graver complexity vs brute force", 120, ac4},
        {5, "oracle equivalence, linear", 300, ac5},
        {6, "oracle equivalence, piecewise", 300, ac6},
        {7, "Graver-best contract", 300, ac7},
        {8, "certification soundness", 180, ac8},
        {9, "feasibility phase", 180, ac9},
        {10, "tables and transportation", 300, ac10},
        {11, "scaling", 300, ac11},
        {12, "descent and termination", 1e9, ac12},
    };
    std::set<int> only;
    for (int k = 1; k < argc; ++k) only.insert(std::atoi(argv[k]));
    int failed = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && !only.count(c.id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (s > c.limit_s) o.fail("took " + std::to_string(s) + " s, limit " + std::to_string(c.limit_s) + " s");
        failed += !o.pass;
        std::printf("AC%-2d %s  %-34s %8.2f s  %s\n", c.id, o.pass ? "PASS" : "FAIL", c.name, s, o.detail.c_str());
        for (const auto& f : o.failures) std::printf("       - %s\n", f.c_str());
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
