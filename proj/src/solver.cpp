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

#include "nfold/solver.hpp"

#include <algorithm>
#include <sstream>

namespace nfold {

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "Optimal";
        case SolveStatus::Infeasible: return "Infeasible";
        case SolveStatus::HeuristicFeasible: return "HeuristicFeasible";
    }
    return "?";
}

namespace {

constexpr Int kCheapAuxiliaryDegree = 8;

std::string matrix_key(const IntegerMatrix& m) {
    std::ostringstream os;
    os << m.rows() << 'x' << m.cols() << ':';
    for (Int v : m.entries()) os << v << ',';
    return os.str();
}

std::string bimatrix_key(const Bimatrix& a) { return matrix_key(a.a1) + '/' + matrix_key(a.a2); }

}  // namespace

IntVector AuxiliaryProgram::x_part(std::span<const Int> aux_point) const {
    const std::size_t aux_t = instance.bimatrix.t();
    IntVector out;
    out.reserve(original_n * original_t);
    for (std::size_t i = 0; i < original_n; ++i)
        out.insert(out.end(), aux_point.begin() + static_cast<std::ptrdiff_t>(i * aux_t),
                   aux_point.begin() + static_cast<std::ptrdiff_t>(i * aux_t + original_t));
    return out;
}

AuxiliaryProgram auxiliary_program(const NFoldInstance& inst, AuxiliaryForm form) {
    inst.validate();
    const Bimatrix& a = inst.bimatrix;
    const std::size_t r = a.r(), s = a.s(), t = a.t(), n = inst.n;
    const bool paired = form == AuxiliaryForm::Paired;
    const std::size_t width = paired ? 2 : 1;  // slack columns per row
    const std::size_t aux_t = t + width * (r + s);
    const std::size_t aux_n = paired ? n : n + 1;

    // Start from the box point closest to 0; the slacks absorb the residual.
    IntVector x0(n * t);
    for (std::size_t k = 0; k < x0.size(); ++k) x0[k] = std::clamp<Int>(0, inst.l[k], inst.u[k]);
    IntVector residual = subtracted(inst.b, inst.constraint_lhs(x0));
    const Int bound = std::max(norm_inf(inst.b), norm_inf(residual));

    IntegerMatrix a1(r, aux_t), a2(s, aux_t);
    for (std::size_t k = 0; k < r; ++k) {
        for (std::size_t j = 0; j < t; ++j) a1(k, j) = a.a1(k, j);
        a1(k, t + k) = 1;
        if (paired) a1(k, t + r + k) = -1;
    }
    const std::size_t s_base = t + width * r;
    for (std::size_t k = 0; k < s; ++k) {
        for (std::size_t j = 0; j < t; ++j) a2(k, j) = a.a2(k, j);
        a2(k, s_base + k) = 1;
        if (paired) a2(k, s_base + s + k) = -1;
    }

    AuxiliaryProgram out;
    out.form = form;
    out.original_t = t;
    out.original_n = n;
    out.original = a;
    NFoldInstance& aux = out.instance;
    aux.bimatrix = {std::move(a1), std::move(a2)};
    aux.n = aux_n;
    aux.b = inst.b;
    aux.b.resize(r + aux_n * s, 0);
    aux.l.assign(aux_n * aux_t, paired ? 0 : -bound);
    aux.u.assign(aux_n * aux_t, bound);
    out.start.assign(aux_n * aux_t, 0);

    // Writes residual value v into the slack block starting at `col` of
    // `rows` rows, row k of brick i.
    auto place = [&](std::size_t i, std::size_t col, std::size_t rows, std::size_t k, Int v) {
        const std::size_t base = i * aux_t + col;
        if (paired) {
            out.start[base + k] = std::max<Int>(v, 0);
            out.start[base + rows + k] = std::max<Int>(-v, 0);
        } else {
            out.start[base + k] = v;
        }
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < t; ++j) {
            aux.l[i * aux_t + j] = inst.l[i * t + j];
            aux.u[i * aux_t + j] = inst.u[i * t + j];
            out.start[i * aux_t + j] = x0[i * t + j];
        }
        for (std::size_t k = 0; k < s; ++k) place(i, s_base, s, k, residual[r + i * s + k]);
    }
    if (paired) {
        for (std::size_t k = 0; k < r; ++k) place(0, t, r, k, residual[k]);
    } else {
        // A1 slack only in the extra brick; everything else there is fixed.
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < r; ++k) aux.l[i * aux_t + t + k] = aux.u[i * aux_t + t + k] = 0;
        for (std::size_t j = 0; j < aux_t; ++j)
            if (j < t || j >= t + r) aux.l[n * aux_t + j] = aux.u[n * aux_t + j] = 0;
        for (std::size_t k = 0; k < r; ++k) place(n, t, r, k, residual[k]);
    }

    if (paired) {
        IntVector w(aux_n * aux_t, 1);
        for (std::size_t i = 0; i < aux_n; ++i)
            for (std::size_t j = 0; j < t; ++j) w[i * aux_t + j] = 0;
        aux.objective = LinearObjective{std::move(w)};
    } else {
        std::vector<PiecewiseTerm> terms;
        const PiecewiseFunction abs_value{{0}, {-1, 1}, {0, 0}};
        for (std::size_t i = 0; i < aux_n; ++i)
            for (std::size_t j = t; j < aux_t; ++j) terms.push_back({i, j, abs_value});
        aux.objective = PiecewiseObjective(aux_n, aux_t, std::move(terms));
    }
    return out;
}

Solver::Solver(SolveOptions options) : options_(std::move(options)) {}

std::size_t Solver::iteration_cap(const NFoldInstance& inst) const {
    if (options_.iteration_cap) return *options_.iteration_cap;
    return 10 * inst.n * static_cast<std::size_t>(inst.binary_length()) + 100;
}

Int Solver::graver_complexity_for(const NFoldInstance& inst) {
    if (inst.graver_complexity_override) return *inst.graver_complexity_override;
    const std::string key = bimatrix_key(inst.bimatrix);
    {
        std::lock_guard lock(mutex_);
        if (auto it = complexity_cache_.find(key); it != complexity_cache_.end()) return it->second;
    }
    Int g;
    try {
        g = graver_complexity(inst.bimatrix, options_.graver_budget).value;
    } catch (const ResourceLimitError& e) {
        throw ResourceLimitError(e.limit(), "--graver-complexity",
                                 std::string("computing the Graver complexity exceeded the ") + e.limit() +
                                     " budget (" + e.what() +
                                     "); supply a known value with --graver-complexity "
                                     "(instance option \"graver_complexity\")");
    }
    std::lock_guard lock(mutex_);
    complexity_cache_.emplace(key, g);
    return g;
}

Solver::Space Solver::space_for(const NFoldInstance& inst, bool force_exact) {
    const bool approximate = inst.degree && !force_exact;
    std::string key = bimatrix_key(inst.bimatrix);
    if (approximate) key += "|d=" + std::to_string(*inst.degree);
    if (inst.graver_complexity_override) key += "|g=" + std::to_string(*inst.graver_complexity_override);
    {
        std::lock_guard lock(mutex_);
        if (auto it = space_cache_.find(key); it != space_cache_.end()) return it->second;
    }

    const std::size_t t = inst.bimatrix.t();
    std::shared_ptr<const StateSpace> z;
    if (approximate) {
        GraverBasis g2 = graver_basis(inst.bimatrix.a2, options_.graver_budget);
        z = std::make_shared<StateSpace>(build_state_space(g2, *inst.degree, inst.graver_complexity_override,
                                                           options_.state_budget));
    } else {
        const Int g = graver_complexity_for(inst);
        if (g == 0) {
            z = std::make_shared<StateSpace>(t, std::vector<IntVector>{IntVector(t, 0)}, 0, true, true);
        } else {
            GraverBasis g2 = graver_basis(inst.bimatrix.a2, options_.graver_budget);
            z = std::make_shared<StateSpace>(build_state_space(g2, g, g, options_.state_budget));
        }
    }
    Space space{z, std::make_shared<TerminalStates>(terminal_states(*z, inst.bimatrix.a1))};
    std::lock_guard lock(mutex_);
    space_cache_.emplace(key, space);
    return space;
}

std::shared_ptr<const StateSpace> Solver::state_space_for(const NFoldInstance& inst) {
    inst.bimatrix.validate();
    return space_for(inst, false).z;
}

Certificate Solver::certify_with(const NFoldInstance& inst, std::span<const Int> x, const ArcWeightModel& weights,
                                 const Space& space) {
    if (!inst.is_feasible(x)) throw InputError("point to certify is not feasible for the instance");
    AugmentationProblem p{inst.n, inst.bimatrix.t(), x, inst.l, inst.u, space.z.get(), space.terminals.get(),
                          &weights};
    DpResult r = solve_dp(p, 1);
    if (r.trivial) return {};
    return {Certificate::Verdict::Improvable, std::move(r.step), r.weight};
}

Certificate Solver::certify_optimal(const NFoldInstance& inst, std::span<const Int> x) {
    inst.validate();
    ArcWeightModel weights = ArcWeightModel::for_objective(inst.objective, inst.bimatrix.t());
    return certify_with(inst, x, weights, space_for(inst, false));
}

Certificate Solver::certify_optimal(const NFoldInstance& inst, std::span<const Int> x, BrickEvaluator f) {
    inst.validate();
    ArcWeightModel weights = ArcWeightModel::convex_delta(std::move(f));
    return certify_with(inst, x, weights, space_for(inst, false));
}

Solver::Space Solver::auxiliary_space(const AuxiliaryProgram& aux, Int degree, bool exact) {
    const Bimatrix& a = aux.original;
    const std::size_t r = a.r(), s = a.s(), t = a.t();
    std::string key = "aux|" + bimatrix_key(a) + "|d=" + std::to_string(degree);
    {
        std::lock_guard lock(mutex_);
        if (auto it = space_cache_.find(key); it != space_cache_.end()) return it->second;
    }
    // G of (A2 0 I) is G(A2 I) padded with zeros, plus the unit vectors of
    // the zero columns; a state's A1 slack costs its 1-norm in summands.
    // Before the last layer the slack is 0; the last layer adds exactly
    // -A1 x, which is all a terminal state can be reached with.
    IntegerMatrix core = a.a2.hstack(IntegerMatrix::identity(s));
    GradedSumset sums = graded_sumset(graver_basis(core, options_.graver_budget), degree, options_.state_budget);
    std::vector<IntVector> states;
    states.reserve(2 * sums.states.size());
    for (std::size_t k = 0; k < sums.states.size(); ++k) {
        const IntVector& w = sums.states[k];
        IntVector state(t + r + s, 0);
        std::copy(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(t), state.begin());
        std::copy(w.begin() + static_cast<std::ptrdiff_t>(t), w.end(), state.begin() + static_cast<std::ptrdiff_t>(t + r));
        states.push_back(state);
        if (r == 0) continue;
        IntVector slack = negated(a.a1.multiply(std::span<const Int>(w).first(t)));
        const Int cost = norm_1(slack);
        if (cost == 0 || cost > degree) continue;
        // The last layer's step from (x, 0, y): just the slack.
        IntVector step(t + r + s, 0);
        std::copy(slack.begin(), slack.end(), step.begin() + static_cast<std::ptrdiff_t>(t));
        states.push_back(std::move(step));
        if (checked_add(cost, sums.depth[k]) > degree) continue;
        std::copy(slack.begin(), slack.end(), state.begin() + static_cast<std::ptrdiff_t>(t));
        states.push_back(std::move(state));
        if (states.size() > options_.state_budget.max_states)
            throw ResourceLimitError("max_states", "--max-states",
                                     "auxiliary state set exceeded " + std::to_string(options_.state_budget.max_states) +
                                         " vectors");
    }
    std::sort(states.begin(), states.end());
    states.erase(std::unique(states.begin(), states.end()), states.end());
    auto z = std::make_shared<StateSpace>(t + r + s, std::move(states), degree, false, exact);
    Space space{z, std::make_shared<TerminalStates>(terminal_states(*z, aux.instance.bimatrix.a1))};
    std::lock_guard lock(mutex_);
    space_cache_.emplace(key, space);
    return space;
}

namespace {

// Per coordinate, the summed widths of all bricks.
IntVector box_reach(const AuxiliaryProgram& aux) {
    const Bimatrix& a = aux.original;
    const std::size_t t = a.t(), width = t + a.r() + a.s();
    IntVector reach(t, 0);
    for (std::size_t i = 0; i < aux.original_n; ++i)
        for (std::size_t j = 0; j < t; ++j)
            reach[j] = checked_add(reach[j], aux.instance.u[i * width + j] - aux.instance.l[i * width + j]);
    return reach;
}

}  // namespace

double Solver::box_estimate(const AuxiliaryProgram& aux) const {
    double count = 3;
    for (Int w : box_reach(aux)) count *= static_cast<double>(2 * w + 1);
    return count;
}

std::optional<Solver::Space> Solver::box_space(const AuxiliaryProgram& aux) {
    const Bimatrix& a = aux.original;
    const std::size_t r = a.r(), s = a.s(), t = a.t(), width = t + r + s;
    if (box_estimate(aux) > static_cast<double>(options_.max_box_states)) return std::nullopt;
    const IntVector reach = box_reach(aux);
    std::string key = "box|" + bimatrix_key(a) + "|";
    for (Int w : reach) key += std::to_string(w) + ",";
    {
        std::lock_guard lock(mutex_);
        if (auto it = space_cache_.find(key); it != space_cache_.end()) return it->second;
    }
    // Core Graver elements are (x, -A2 x), so a state is fixed by its x
    // part, and every prefix of a step that fits the bounds has |x_j| at most
    // the summed widths of coordinate j.
    std::vector<IntVector> states;
    IntVector x = negated(reach);
    for (bool more = true; more;) {
        IntVector state(width, 0);
        std::copy(x.begin(), x.end(), state.begin());
        IntVector y = negated(a.a2.multiply(x));
        std::copy(y.begin(), y.end(), state.begin() + static_cast<std::ptrdiff_t>(t + r));
        IntVector slack = negated(a.a1.multiply(x));
        states.push_back(state);
        if (!is_zero(slack)) {
            std::copy(slack.begin(), slack.end(), state.begin() + static_cast<std::ptrdiff_t>(t));
            states.push_back(state);
            IntVector step(width, 0);
            std::copy(slack.begin(), slack.end(), step.begin() + static_cast<std::ptrdiff_t>(t));
            states.push_back(std::move(step));
        }
        std::size_t j = 0;
        while (j < t && x[j] == reach[j]) {
            x[j] = -reach[j];
            ++j;
        }
        if (j == t) more = false;
        else ++x[j];
    }
    std::sort(states.begin(), states.end());
    states.erase(std::unique(states.begin(), states.end()), states.end());
    auto z = std::make_shared<StateSpace>(width, std::move(states), 0, false, true);
    Space space{z, std::make_shared<TerminalStates>(terminal_states(*z, aux.instance.bimatrix.a1))};
    std::lock_guard lock(mutex_);
    space_cache_.emplace(key, space);
    return space;
}

SolveReport Solver::augment(const NFoldInstance& inst, std::span<const Int> x0, const Space& space,
                            std::optional<Int> floor) {
    const std::size_t t = inst.bimatrix.t();
    const ArcWeightModel weights = ArcWeightModel::for_objective(inst.objective, t);
    const auto* pw = std::get_if<PiecewiseObjective>(&inst.objective);
    const std::size_t cap = iteration_cap(inst);

    SolveReport report;
    IntVector x(x0.begin(), x0.end());
    Int value = evaluate_objective(inst.objective, x);
    while (!floor || value > *floor) {
        AugmentationProblem p{inst.n, t, x, inst.l, inst.u, space.z.get(), space.terminals.get(), &weights};
        auto best = graver_best_step(p, pw, options_.threads);
        if (!best) break;
        if (report.iterations >= cap)
            throw ResourceLimitError("iteration_cap", "--iteration-cap",
                                     "augmentation still improving after the safety cap of " +
                                         std::to_string(cap) + " iterations");
        IntVector move = scaled(best->step, best->gamma);
        x = added(x, move);
        const Int next = evaluate_objective(inst.objective, x);
        if (next != checked_add(value, best->delta) || next >= value || !inst.is_feasible(x))
            throw Error("internal error: augmenting step did not produce the reported improvement");
        value = next;
        ++report.iterations;
        report.trace.push_back({best->gamma, norm_1(move), value});
    }
    report.exact = space.z->exact();
    if (report.exact && (!floor || value > *floor)) {
        AugmentationProblem p{inst.n, t, x, inst.l, inst.u, space.z.get(), space.terminals.get(), &weights};
        if (!solve_dp(p, 1).trivial)
            throw Error("internal error: no Graver-best step but the unit-step DP still improves");
    }
    report.status = report.exact ? SolveStatus::Optimal : SolveStatus::HeuristicFeasible;
    report.point = std::move(x);
    report.objective_value = value;
    return report;
}

SolveReport Solver::augment_to_optimal(const NFoldInstance& inst, std::span<const Int> x0) {
    inst.validate();
    if (!inst.is_feasible(x0)) throw InputError("starting point is not feasible for the instance");
    return augment(inst, x0, space_for(inst, false), std::nullopt);
}

std::optional<Int> Solver::auxiliary_complexity(const AuxiliaryProgram& aux) {
    const std::string key = "aux|" + bimatrix_key(aux.instance.bimatrix);
    {
        std::lock_guard lock(mutex_);
        if (auto it = aux_complexity_cache_.find(key); it != aux_complexity_cache_.end()) return it->second;
    }
    std::optional<Int> g;
    try {
        g = graver_complexity(aux.instance.bimatrix, options_.auxiliary_graver_budget).value;
    } catch (const ResourceLimitError&) {
    }
    std::lock_guard lock(mutex_);
    aux_complexity_cache_.emplace(key, g);
    return g;
}

FeasibilityResult Solver::find_feasible(const NFoldInstance& inst) {
    inst.validate();
    std::ostringstream key;
    key << bimatrix_key(inst.bimatrix) << '|' << inst.n << '|' << static_cast<int>(options_.auxiliary);
    for (const IntVector* v : {&inst.b, &inst.l, &inst.u}) {
        key << '|';
        for (Int x : *v) key << x << ',';
    }
    {
        std::lock_guard lock(mutex_);
        if (auto it = feasibility_cache_.find(key.str()); it != feasibility_cache_.end()) return it->second;
    }
    FeasibilityResult out = decide_feasibility(inst);
    std::lock_guard lock(mutex_);
    feasibility_cache_.emplace(key.str(), out);
    return out;
}

FeasibilityResult Solver::decide_feasibility(const NFoldInstance& inst) {
    AuxiliaryProgram aux = auxiliary_program(inst, options_.auxiliary);
    FeasibilityResult out;
    const Int start_value = evaluate_objective(aux.instance.objective, aux.start);
    if (start_value == 0) {
        out.auxiliary.status = SolveStatus::Optimal;
        out.auxiliary.point = aux.start;
        out.point = aux.x_part(aux.start);
        return out;
    }
    if (aux.form == AuxiliaryForm::Paired) {
        out.auxiliary = augment(aux.instance, aux.start, space_for(aux.instance, false), Int{0});
    } else {
        // A zero-cost point found at any degree is a feasibility proof, so
        // the cheap degrees go first; the Graver complexity of the auxiliary
        // bimatrix is only needed to prove infeasibility.
        IntVector x = aux.start;
        std::size_t iterations = 0;
        std::vector<TraceEntry> trace;
        auto run = [&](const Space& space) {
            out.auxiliary = augment(aux.instance, x, space, Int{0});
            x = *out.auxiliary.point;
            iterations += out.auxiliary.iterations;
            trace.insert(trace.end(), out.auxiliary.trace.begin(), out.auxiliary.trace.end());
            return out.auxiliary.objective_value == 0;
        };
        // Once the exact box set is no bigger than the last space built,
        // it is the cheaper next step.
        const double box = box_estimate(aux);
        const bool box_fits = box <= static_cast<double>(options_.max_box_states);
        Int d = 1;
        bool done = false;
        for (std::size_t last = 0; d <= std::min(options_.max_auxiliary_degree, kCheapAuxiliaryDegree) && !done;
             d *= 2) {
            if (box_fits && box <= static_cast<double>(last)) break;
            Space space = auxiliary_space(aux, d, false);
            last = space.z->size();
            done = run(space);
        }
        if (!done) {
            if (auto box = box_space(aux)) {
                run(*box);
                done = true;
            } else if (std::optional<Int> g = auxiliary_complexity(aux)) {
                run(auxiliary_space(aux, *g, true));
                done = true;
            }
            for (; d <= options_.max_auxiliary_degree && !done; d *= 2) done = run(auxiliary_space(aux, d, false));
        }
        out.auxiliary.iterations = iterations;
        out.auxiliary.trace = std::move(trace);
        if (!done)
            throw ResourceLimitError(
                "graver_complexity", "",
                "feasibility undecided: the Graver complexity of the auxiliary bimatrix is beyond budget and "
                "no feasible point was found up to degree " +
                    std::to_string(options_.max_auxiliary_degree));
    }
    if (out.auxiliary.objective_value == 0) {
        out.point = aux.x_part(*out.auxiliary.point);
        if (!inst.is_feasible(*out.point))
            throw Error("internal error: auxiliary optimum 0 but recovered point is infeasible");
    }
    return out;
}

SolveReport Solver::solve(const NFoldInstance& inst) {
    inst.validate();
    FeasibilityResult feasible = find_feasible(inst);
    if (!feasible.point) {
        SolveReport report;
        report.status = SolveStatus::Infeasible;
        return report;
    }
    SolveReport report = augment_to_optimal(inst, *feasible.point);
    if (!report.exact && options_.certify_exact) {
        ArcWeightModel weights = ArcWeightModel::for_objective(inst.objective, inst.bimatrix.t());
        if (certify_with(inst, *report.point, weights, space_for(inst, true)).optimal()) {
            report.exact = true;
            report.status = SolveStatus::Optimal;
        }
    }
    return report;
}

}  // namespace nfold
