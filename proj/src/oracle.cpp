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

#include "nfold/oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <string>

namespace nfold::oracle {

namespace {

using Vec = IntVector;

class Counter {
  public:
    explicit Counter(std::size_t limit) : limit_(limit) {}
    void tick(std::size_t k = 1) {
        count_ += k;
        if (count_ > limit_)
            throw ResourceLimitError("max_points", "",
                                     "oracle enumeration visited more than " + std::to_string(limit_) + " points");
    }

  private:
    std::size_t limit_;
    std::size_t count_ = 0;
};

// Calls visit(point) for every integer point of the box [lo, hi].
void for_each_point(const Vec& lo, const Vec& hi, Counter& counter, const std::function<void(const Vec&)>& visit) {
    Vec p = lo;
    for (std::size_t k = 0; k < lo.size(); ++k)
        if (lo[k] > hi[k]) return;
    for (;;) {
        counter.tick();
        visit(p);
        std::size_t k = 0;
        while (k < p.size() && p[k] == hi[k]) {
            p[k] = lo[k];
            ++k;
        }
        if (k == p.size()) return;
        ++p[k];
    }
}

Vec times(const IntegerMatrix& m, const Vec& v) {
    Vec out(m.rows(), 0);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out[i] += m(i, j) * v[j];
    return out;
}

bool all_zero(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](Int x) { return x == 0; });
}

// a below b in the conformal order.
bool below(const Vec& a, const Vec& b) {
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] == 0) continue;
        if (a[k] > 0 && (b[k] < a[k])) return false;
        if (a[k] < 0 && (b[k] > a[k])) return false;
    }
    return true;
}

Int brick_value(const NFoldInstance& inst, std::size_t i, const Vec& xi) {
    const std::size_t t = inst.bimatrix.t();
    Int acc = 0;
    if (const auto* lin = std::get_if<LinearObjective>(&inst.objective)) {
        for (std::size_t j = 0; j < t; ++j) acc += lin->w[i * t + j] * xi[j];
        return acc;
    }
    for (const auto& term : std::get<PiecewiseObjective>(inst.objective).terms()) {
        if (term.brick != i) continue;
        Int best = 0;
        for (std::size_t k = 0; k < term.f.slopes.size(); ++k) {
            Int v = term.f.slopes[k] * xi[term.coord] + term.f.intercepts[k];
            if (k == 0 || v > best) best = v;
        }
        acc += best;
    }
    return acc;
}

struct BrickOption {
    Vec x;
    Vec top;  // A1 x
    Int value;
};

std::vector<std::vector<BrickOption>> brick_options(const NFoldInstance& inst, Counter& counter) {
    const std::size_t t = inst.bimatrix.t(), s = inst.bimatrix.s(), r = inst.bimatrix.r();
    std::vector<std::vector<BrickOption>> out(inst.n);
    for (std::size_t i = 0; i < inst.n; ++i) {
        Vec lo(inst.l.begin() + static_cast<std::ptrdiff_t>(i * t), inst.l.begin() + static_cast<std::ptrdiff_t>((i + 1) * t));
        Vec hi(inst.u.begin() + static_cast<std::ptrdiff_t>(i * t), inst.u.begin() + static_cast<std::ptrdiff_t>((i + 1) * t));
        Vec want(inst.b.begin() + static_cast<std::ptrdiff_t>(r + i * s),
                 inst.b.begin() + static_cast<std::ptrdiff_t>(r + (i + 1) * s));
        for_each_point(lo, hi, counter, [&](const Vec& x) {
            if (times(inst.bimatrix.a2, x) != want) return;
            out[i].push_back({x, times(inst.bimatrix.a1, x), brick_value(inst, i, x)});
        });
    }
    return out;
}

}  // namespace

Int objective_value(const NFoldInstance& inst, const IntVector& x) {
    const std::size_t t = inst.bimatrix.t();
    Int acc = 0;
    for (std::size_t i = 0; i < inst.n; ++i)
        acc += brick_value(inst, i, Vec(x.begin() + static_cast<std::ptrdiff_t>(i * t),
                                        x.begin() + static_cast<std::ptrdiff_t>((i + 1) * t)));
    return acc;
}

OracleSolution brute_force_solve(const NFoldInstance& inst, const EnumerationBudget& budget) {
    Counter counter(budget.max_points);
    auto options = brick_options(inst, counter);
    const std::size_t r = inst.bimatrix.r();

    struct Entry {
        Int value;
        std::size_t prev;    // index into the previous layer
        std::size_t option;  // index into options[i]
    };
    std::vector<std::map<Vec, std::size_t>> index(inst.n + 1);
    std::vector<std::vector<Entry>> layers(inst.n + 1);
    index[0][Vec(r, 0)] = 0;
    layers[0].push_back({0, 0, 0});
    for (std::size_t i = 0; i < inst.n; ++i) {
        for (const auto& [sum, at] : index[i]) {
            const Int base = layers[i][at].value;
            for (std::size_t o = 0; o < options[i].size(); ++o) {
                counter.tick();
                Vec next = sum;
                for (std::size_t k = 0; k < r; ++k) next[k] += options[i][o].top[k];
                const Int v = base + options[i][o].value;
                auto [it, fresh] = index[i + 1].emplace(next, layers[i + 1].size());
                if (fresh)
                    layers[i + 1].push_back({v, at, o});
                else if (v < layers[i + 1][it->second].value)
                    layers[i + 1][it->second] = {v, at, o};
            }
        }
    }
    OracleSolution out;
    Vec target(inst.b.begin(), inst.b.begin() + static_cast<std::ptrdiff_t>(r));
    auto it = index[inst.n].find(target);
    if (it == index[inst.n].end()) return out;
    out.feasible = true;
    out.value = layers[inst.n][it->second].value;
    std::vector<Vec> bricks(inst.n);
    std::size_t at = it->second;
    for (std::size_t i = inst.n; i-- > 0;) {
        const Entry& e = layers[i + 1][at];
        bricks[i] = options[i][e.option].x;
        at = e.prev;
    }
    for (const auto& b : bricks) out.point.insert(out.point.end(), b.begin(), b.end());
    return out;
}

std::vector<IntVector> enumerate_feasible(const NFoldInstance& inst, const EnumerationBudget& budget) {
    Counter counter(budget.max_points);
    auto options = brick_options(inst, counter);
    const std::size_t r = inst.bimatrix.r();
    Vec target(inst.b.begin(), inst.b.begin() + static_cast<std::ptrdiff_t>(r));
    std::vector<IntVector> out;
    std::vector<std::size_t> choice(inst.n);
    std::function<void(std::size_t, Vec)> walk = [&](std::size_t i, Vec sum) {
        if (i == inst.n) {
            if (sum != target) return;
            IntVector x;
            for (std::size_t k = 0; k < inst.n; ++k)
                x.insert(x.end(), options[k][choice[k]].x.begin(), options[k][choice[k]].x.end());
            out.push_back(std::move(x));
            return;
        }
        for (std::size_t o = 0; o < options[i].size(); ++o) {
            counter.tick();
            choice[i] = o;
            Vec next = sum;
            for (std::size_t k = 0; k < r; ++k) next[k] += options[i][o].top[k];
            walk(i + 1, std::move(next));
        }
    };
    walk(0, Vec(r, 0));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<IntVector> brute_force_graver(const IntegerMatrix& m, const EnumerationBudget& budget) {
    Counter counter(budget.max_points);
    const Vec lo(m.cols(), -budget.max_norm), hi(m.cols(), budget.max_norm);
    std::vector<Vec> kernel;
    for_each_point(lo, hi, counter, [&](const Vec& v) {
        if (!all_zero(v) && all_zero(times(m, v))) kernel.push_back(v);
    });
    auto l1 = [](const Vec& v) {
        Int a = 0;
        for (Int x : v) a += x < 0 ? -x : x;
        return a;
    };
    std::stable_sort(kernel.begin(), kernel.end(), [&](const Vec& a, const Vec& b) { return l1(a) < l1(b); });
    // A non-minimal vector dominates a minimal one of strictly smaller norm,
    // which has already been kept by the time it is visited.
    std::vector<Vec> minimal;
    for (const auto& v : kernel) {
        bool dominated = false;
        for (const auto& u : minimal)
            if (below(u, v)) {
                dominated = true;
                break;
            }
        if (!dominated) minimal.push_back(v);
    }
    std::vector<IntVector> out(minimal.begin(), minimal.end());
    std::sort(out.begin(), out.end());
    return out;
}

Int brute_force_graver_complexity(const Bimatrix& a, std::size_t n_max, const EnumerationBudget& budget) {
    Counter counter(budget.max_points);
    const std::size_t t = a.t(), r = a.r();
    const Vec lo(t, -budget.max_norm), hi(t, budget.max_norm);
    std::vector<Vec> bricks;  // zero first, then nonzero kernel vectors of A2
    bricks.push_back(Vec(t, 0));
    for_each_point(lo, hi, counter, [&](const Vec& v) {
        if (!all_zero(v) && all_zero(times(a.a2, v))) bricks.push_back(v);
    });
    std::vector<Vec> tops;
    for (const auto& b : bricks) tops.push_back(times(a.a1, b));

    Int best = 0;
    for (std::size_t n = 1; n <= n_max; ++n) {
        std::vector<std::size_t> pick(n);
        // Is there a nonzero kernel vector of A^(n) strictly below the picked one?
        auto has_smaller = [&]() {
            std::vector<std::vector<std::size_t>> under(n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t k = 0; k < bricks.size(); ++k)
                    if (below(bricks[k], bricks[pick[i]])) under[i].push_back(k);
            std::vector<std::size_t> sub(n);
            std::function<bool(std::size_t, Vec)> walk = [&](std::size_t i, Vec sum) -> bool {
                if (i == n) {
                    if (!all_zero(sum)) return false;
                    bool zero = true, same = true;
                    for (std::size_t k = 0; k < n; ++k) {
                        if (sub[k] != 0) zero = false;
                        if (sub[k] != pick[k]) same = false;
                    }
                    return !zero && !same;
                }
                for (std::size_t k : under[i]) {
                    counter.tick();
                    sub[i] = k;
                    Vec next = sum;
                    for (std::size_t q = 0; q < r; ++q) next[q] += tops[k][q];
                    if (walk(i + 1, std::move(next))) return true;
                }
                return false;
            };
            return walk(0, Vec(r, 0));
        };
        std::function<void(std::size_t, Vec, Int)> outer = [&](std::size_t i, Vec sum, Int nonzero) {
            if (i == n) {
                if (nonzero <= best || !all_zero(sum)) return;
                if (!has_smaller()) best = nonzero;
                return;
            }
            // Not enough bricks left to beat the current best.
            if (nonzero + static_cast<Int>(n - i) <= best) return;
            for (std::size_t k = 0; k < bricks.size(); ++k) {
                counter.tick();
                pick[i] = k;
                Vec next = sum;
                for (std::size_t q = 0; q < r; ++q) next[q] += tops[k][q];
                outer(i + 1, std::move(next), nonzero + (k != 0 ? 1 : 0));
            }
        };
        outer(0, Vec(r, 0), 0);
    }
    return best;
}

std::vector<Table> enumerate_tables(const TableInstance& t, const EnumerationBudget& budget) {
    Counter counter(budget.max_points);
    const std::size_t n = t.n, p = t.p, q = t.q;
    // All p x q slices with row sums ij[i] and column sums ik[i].
    auto slices = [&](std::size_t i) {
        std::vector<std::vector<Vec>> out;
        std::vector<Vec> cur(p, Vec(q, 0));
        Vec col_left = t.ik[i];
        std::function<void(std::size_t, std::size_t, Int)> fill = [&](std::size_t j, std::size_t k, Int row_left) {
            if (k == q) {
                if (row_left != 0) return;
                if (j + 1 == p) {
                    if (all_zero(col_left)) out.push_back(cur);
                    return;
                }
                fill(j + 1, 0, t.ij[i][j + 1]);
                return;
            }
            for (Int v = 0; v <= std::min(row_left, col_left[k]); ++v) {
                counter.tick();
                cur[j][k] = v;
                col_left[k] -= v;
                fill(j, k + 1, row_left - v);
                col_left[k] += v;
            }
            cur[j][k] = 0;
        };
        fill(0, 0, t.ij[i][0]);
        return out;
    };
    std::vector<std::vector<std::vector<Vec>>> options(n);
    for (std::size_t i = 0; i < n; ++i) options[i] = slices(i);

    std::vector<Table> out;
    Table cur(n);
    std::vector<Vec> left = t.jk;
    std::function<void(std::size_t)> walk = [&](std::size_t i) {
        if (i == n) {
            for (const auto& row : left)
                if (!all_zero(row)) return;
            out.push_back(cur);
            return;
        }
        for (const auto& slice : options[i]) {
            counter.tick();
            bool fits = true;
            for (std::size_t j = 0; j < p && fits; ++j)
                for (std::size_t k = 0; k < q && fits; ++k) fits = slice[j][k] <= left[j][k];
            if (!fits) continue;
            for (std::size_t j = 0; j < p; ++j)
                for (std::size_t k = 0; k < q; ++k) left[j][k] -= slice[j][k];
            cur[i] = slice;
            walk(i + 1);
            for (std::size_t j = 0; j < p; ++j)
                for (std::size_t k = 0; k < q; ++k) left[j][k] += slice[j][k];
        }
    };
    walk(0);
    std::sort(out.begin(), out.end());
    return out;
}

TransportationOptimum brute_force_transportation(const TransportationInstance& t, const EnumerationBudget& budget) {
    Counter counter(budget.max_points);
    const std::size_t l = t.l, m = t.m, n = t.n;
    auto cost_of = [](const PiecewiseFunction& f, Int v) {
        Int best = 0;
        for (std::size_t k = 0; k < f.slopes.size(); ++k) {
            Int c = f.slopes[k] * v + f.intercepts[k];
            if (k == 0 || c > best) best = c;
        }
        return best;
    };
    // Route (i, j) in order; each carries a vector of l commodities.
    std::vector<Vec> supply_left = t.supply, demand_left = t.demand;
    TransportationOptimum best;
    std::function<void(std::size_t, Int)> route = [&](std::size_t e, Int acc) {
        if (e == m * n) {
            for (const auto& v : supply_left)
                if (!all_zero(v)) return;
            for (const auto& v : demand_left)
                if (!all_zero(v)) return;
            if (!best.feasible || acc < best.cost) best = {true, acc};
            return;
        }
        const std::size_t i = e / n, j = e % n;
        Vec flow(l, 0);
        std::function<void(std::size_t, Int)> commodity = [&](std::size_t k, Int sent) {
            if (k == l) {
                route(e + 1, acc + cost_of(t.cost[i][j], sent));
                return;
            }
            for (Int v = 0; v <= std::min({supply_left[i][k], demand_left[j][k], t.capacity[i][j] - sent}); ++v) {
                counter.tick();
                supply_left[i][k] -= v;
                demand_left[j][k] -= v;
                commodity(k + 1, sent + v);
                supply_left[i][k] += v;
                demand_left[j][k] += v;
            }
        };
        commodity(0, 0);
    };
    route(0, 0);
    return best;
}

}  // namespace nfold::oracle
