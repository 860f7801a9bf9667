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

#include "nfold/models.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <utility>

namespace nfold {

namespace {

void require_shape(const std::vector<IntVector>& m, std::size_t rows, std::size_t cols, const char* what) {
    if (m.size() != rows) throw InputError(std::string(what) + " must have " + std::to_string(rows) + " rows");
    for (const auto& row : m) {
        if (row.size() != cols)
            throw InputError(std::string(what) + " rows must have " + std::to_string(cols) + " entries");
        for (Int v : row)
            if (v < 0) throw InputError(std::string(what) + " entries must be nonnegative");
    }
}

Int total(const std::vector<IntVector>& m) {
    Int acc = 0;
    for (const auto& row : m)
        for (Int v : row) acc = checked_add(acc, v);
    return acc;
}

// Incidence matrix of K_{q,p} with edge (k, j) at column j q + k: q rows
// summing over j, then p rows summing over k.
IntegerMatrix bipartite_incidence(std::size_t p, std::size_t q) {
    IntegerMatrix a(q + p, p * q);
    for (std::size_t j = 0; j < p; ++j)
        for (std::size_t k = 0; k < q; ++k) {
            a(k, j * q + k) = 1;
            a(q + j, j * q + k) = 1;
        }
    return a;
}

void check_size(std::size_t variables, const ModelLimits& limits) {
    if (variables > limits.max_variables)
        throw ResourceLimitError("max_variables", "",
                                 "model needs " + std::to_string(variables) + " variables, more than the limit of " +
                                     std::to_string(limits.max_variables));
}

}  // namespace

Bimatrix universal_bimatrix(std::size_t m) {
    if (m < 1) throw InputError("universal bimatrix needs m >= 1");
    return {IntegerMatrix::identity(3 * m), bipartite_incidence(m, 3)};
}

// ---------------------------------------------------------------------------

void TransportationInstance::validate() const {
    if (l == 0 || m == 0 || n == 0) throw InputError("transportation instance needs l, m, n >= 1");
    require_shape(supply, m, l, "supply");
    require_shape(demand, n, l, "demand");
    require_shape(capacity, m, n, "capacity");
    if (cost.size() != m) throw InputError("cost must have " + std::to_string(m) + " rows");
    for (const auto& row : cost) {
        if (row.size() != n) throw InputError("cost rows must have " + std::to_string(n) + " entries");
        for (const auto& f : row) f.validate();
    }
}

std::size_t TransportationModel::index(std::size_t i, std::size_t j, std::size_t k) const {
    return j * m * (l + 1) + i * (l + 1) + k;
}

Routing TransportationModel::decode(std::span<const Int> x) const {
    if (x.size() != instance.dim()) throw InputError("point has the wrong length for this model");
    Routing flow(m, std::vector<IntVector>(n, IntVector(l, 0)));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < l; ++k) flow[i][j][k] = x[index(i, j, k)];
    return flow;
}

TransportationModel transportation_to_nfold(const TransportationInstance& tr, const ModelLimits& limits) {
    tr.validate();
    const std::size_t l = tr.l, m = tr.m, n = tr.n, t = m * (l + 1);
    check_size(checked_mul(static_cast<Int>(n), static_cast<Int>(t)), limits);

    IntegerMatrix a1(m * l, t), a2(l + m, t);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t k = 0; k < l; ++k) {
            a1(i * l + k, i * (l + 1) + k) = 1;
            a2(k, i * (l + 1) + k) = 1;
            a2(l + i, i * (l + 1) + k) = -1;
        }
        a2(l + i, i * (l + 1) + l) = 1;
    }

    TransportationModel out;
    out.l = l;
    out.m = m;
    out.n = n;
    NFoldInstance& inst = out.instance;
    inst.bimatrix = {std::move(a1), std::move(a2)};
    inst.n = n;
    for (std::size_t i = 0; i < m; ++i) inst.b.insert(inst.b.end(), tr.supply[i].begin(), tr.supply[i].end());
    for (std::size_t j = 0; j < n; ++j) {
        inst.b.insert(inst.b.end(), tr.demand[j].begin(), tr.demand[j].end());
        inst.b.insert(inst.b.end(), m, 0);
    }
    inst.l.assign(n * t, 0);
    inst.u.assign(n * t, 0);
    std::vector<PiecewiseTerm> terms;
    std::size_t pieces = 1;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t k = 0; k <= l; ++k) inst.u[out.index(i, j, k)] = tr.capacity[i][j];
            terms.push_back({j, i * (l + 1) + l, tr.cost[i][j]});
            pieces = std::max(pieces, tr.cost[i][j].pieces());
        }
    inst.objective = PiecewiseObjective(n, t, std::move(terms), std::max(pieces, PiecewiseObjective::kDefaultMaxPieces));
    return out;
}

Int routing_cost(const TransportationInstance& t, const Routing& flow) {
    Int acc = 0;
    for (std::size_t i = 0; i < t.m; ++i)
        for (std::size_t j = 0; j < t.n; ++j) {
            Int sent = 0;
            for (Int v : flow[i][j]) sent = checked_add(sent, v);
            acc = checked_add(acc, t.cost[i][j].evaluate(sent));
        }
    return acc;
}

// ---------------------------------------------------------------------------

void TableInstance::validate() const {
    if (n == 0 || p == 0 || q == 0) throw InputError("table dimensions must be >= 1");
    require_shape(jk, p, q, "margin jk");
    require_shape(ik, n, q, "margin ik");
    require_shape(ij, n, p, "margin ij");
    const Int a = total(jk), b = total(ik), c = total(ij);
    if (a != b || b != c)
        throw InputError("inconsistent margins: grand totals " + std::to_string(a) + ", " + std::to_string(b) + ", " +
                         std::to_string(c));
}

Int TableInstance::max_margin() const {
    Int best = 0;
    for (const auto* m : {&jk, &ik, &ij})
        for (const auto& row : *m)
            for (Int v : row) best = std::max(best, v);
    return best;
}

TableInstance TableInstance::from_table(const std::vector<std::vector<IntVector>>& table) {
    TableInstance t;
    t.n = table.size();
    t.p = t.n ? table[0].size() : 0;
    t.q = t.p ? table[0][0].size() : 0;
    t.jk.assign(t.p, IntVector(t.q, 0));
    t.ik.assign(t.n, IntVector(t.q, 0));
    t.ij.assign(t.n, IntVector(t.p, 0));
    for (std::size_t i = 0; i < t.n; ++i)
        for (std::size_t j = 0; j < t.p; ++j)
            for (std::size_t k = 0; k < t.q; ++k) {
                const Int v = table[i][j][k];
                t.jk[j][k] += v;
                t.ik[i][k] += v;
                t.ij[i][j] += v;
            }
    return t;
}

Table TableModel::decode(std::span<const Int> x) const {
    if (x.size() != instance.dim()) throw InputError("point has the wrong length for this model");
    Table out(n, std::vector<IntVector>(p, IntVector(q, 0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j)
            for (std::size_t k = 0; k < q; ++k) out[i][j][k] = x[index({i, j, k})];
    return out;
}

TableModel table_to_nfold(const TableInstance& t, const ModelLimits& limits) {
    t.validate();
    const std::size_t cols = t.p * t.q;
    check_size(checked_mul(static_cast<Int>(t.n), static_cast<Int>(cols)), limits);
    TableModel out;
    out.n = t.n;
    out.p = t.p;
    out.q = t.q;
    NFoldInstance& inst = out.instance;
    inst.bimatrix = {IntegerMatrix::identity(cols), bipartite_incidence(t.p, t.q)};
    inst.n = t.n;
    for (const auto& row : t.jk) inst.b.insert(inst.b.end(), row.begin(), row.end());
    for (std::size_t i = 0; i < t.n; ++i) {
        inst.b.insert(inst.b.end(), t.ik[i].begin(), t.ik[i].end());
        inst.b.insert(inst.b.end(), t.ij[i].begin(), t.ij[i].end());
    }
    inst.l.assign(t.n * cols, 0);
    inst.u.assign(t.n * cols, t.max_margin());
    inst.objective = LinearObjective{IntVector(t.n * cols, 0)};
    // g(A(3)) = 9 is known; computing it from scratch is far beyond budget.
    if (t.p == 3 && t.q == 3) inst.graver_complexity_override = 9;
    return out;
}

namespace {

struct EntrySolve {
    Int value = 0;
    IntVector point;
    Table table;
};

// Optimizes sign * x_cell with the cell restricted to [lo, hi], starting
// from a table that already satisfies those bounds.
EntrySolve optimize_entry(Solver& solver, const TableModel& model, std::size_t at, Int sign, Int lo, Int hi,
                          const IntVector& start) {
    NFoldInstance inst = model.instance;
    IntVector w(inst.dim(), 0);
    w[at] = sign;
    inst.objective = LinearObjective{std::move(w)};
    inst.l[at] = lo;
    inst.u[at] = hi;
    SolveReport report = solver.augment_to_optimal(inst, start);
    EntrySolve out;
    if (report.status != SolveStatus::Optimal)
        throw Error("entry bounds need exact optima; the solver returned " + std::string(to_string(report.status)));
    out.point = std::move(*report.point);
    out.value = out.point[at];
    out.table = model.decode(out.point);
    return out;
}

// Both extremes of the entry, each with its optimal point; {} if the margins
// admit no table.
std::optional<std::pair<EntrySolve, EntrySolve>> extremes(Solver& solver, const TableModel& model, std::size_t at) {
    const Int lo_bound = model.instance.l[at], hi_bound = model.instance.u[at];
    FeasibilityResult feasible = solver.find_feasible(model.instance);
    if (!feasible.point) return std::nullopt;
    EntrySolve lo = optimize_entry(solver, model, at, 1, lo_bound, hi_bound, *feasible.point);
    EntrySolve hi = optimize_entry(solver, model, at, -1, lo_bound, hi_bound, lo.point);
    return std::pair{std::move(lo), std::move(hi)};
}

// Each entry is at most the smallest of its three line sums. Same tables,
// but a much smaller box for the feasibility phase to work in.
TableModel tightened_model(const TableInstance& t) {
    TableModel model = table_to_nfold(t);
    for (std::size_t i = 0; i < t.n; ++i)
        for (std::size_t j = 0; j < t.p; ++j)
            for (std::size_t k = 0; k < t.q; ++k)
                model.instance.u[model.index({i, j, k})] = std::min({t.ij[i][j], t.ik[i][k], t.jk[j][k]});
    return model;
}

std::size_t checked_cell(const TableInstance& t, const TableModel& model, const Cell& cell) {
    if (cell.i >= t.n || cell.j >= t.p || cell.k >= t.q) throw InputError("cell outside the table");
    return model.index(cell);
}

}  // namespace

EntryBounds entry_bounds(Solver& solver, const TableInstance& t, const Cell& cell) {
    TableModel model = tightened_model(t);
    auto ends = extremes(solver, model, checked_cell(t, model, cell));
    EntryBounds out;
    if (!ends) return out;
    out.feasible = true;
    out.min = ends->first.value;
    out.max = ends->second.value;
    out.min_table = std::move(ends->first.table);
    out.max_table = std::move(ends->second.table);
    return out;
}

std::vector<Int> entry_value_range(Solver& solver, const TableInstance& t, const Cell& cell) {
    TableModel model = tightened_model(t);
    const std::size_t at = checked_cell(t, model, cell);
    auto ends = extremes(solver, model, at);
    if (!ends) return {};
    EntrySolve lo = std::move(ends->first), hi = std::move(ends->second);
    std::vector<Int> low{lo.value}, high{hi.value};
    // Raise the lower end and lower the upper end in turn; each solve lands
    // on the next attained value inwards, starting from the opposite end's
    // table, which the narrowed bounds still admit.
    bool from_below = true;
    while (lo.value < hi.value) {
        if (from_below) {
            lo = optimize_entry(solver, model, at, 1, lo.value + 1, hi.value, hi.point);
            if (lo.value < hi.value) low.push_back(lo.value);
        } else {
            hi = optimize_entry(solver, model, at, -1, lo.value, hi.value - 1, lo.point);
            if (lo.value < hi.value) high.push_back(hi.value);
        }
        from_below = !from_below;
    }
    low.insert(low.end(), high.rbegin(), high.rend());
    low.erase(std::unique(low.begin(), low.end()), low.end());
    return low;
}

}  // namespace nfold
