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

#include "nfold/dp_engine.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <limits>
#include <memory>
#include <set>
#include <thread>

namespace nfold {

ArcWeightModel ArcWeightModel::linear(IntVector w, std::size_t t) {
    ArcWeightModel m;
    m.kind_ = Kind::Linear;
    m.t_ = t;
    m.w_ = std::move(w);
    return m;
}

ArcWeightModel ArcWeightModel::convex_delta(BrickEvaluator f) {
    ArcWeightModel m;
    m.kind_ = Kind::ConvexDelta;
    m.f_ = std::move(f);
    return m;
}

ArcWeightModel ArcWeightModel::for_objective(const Objective& f, std::size_t t) {
    if (const auto* lin = std::get_if<LinearObjective>(&f)) return linear(lin->w, t);
    auto pw = std::make_shared<const PiecewiseObjective>(std::get<PiecewiseObjective>(f));
    return convex_delta([pw](std::size_t brick, std::span<const Int> xi) { return pw->evaluate_brick(brick, xi); });
}

Int ArcWeightModel::weight(std::size_t brick, std::span<const Int> xi, std::span<const Int> yi) const {
    if (kind_ == Kind::ConvexDelta) return checked_sub(f_(brick, yi), f_(brick, xi));
    Int acc = 0;
    for (std::size_t j = 0; j < xi.size(); ++j)
        acc = checked_add(acc, checked_mul(w_[brick * t_ + j], checked_sub(yi[j], xi[j])));
    return acc;
}

namespace {

constexpr Int kUnreached = std::numeric_limits<Int>::max();

struct Arc {
    std::uint32_t state;
    Int weight;
};

// x + gamma g within [lo, hi] coordinatewise; overflow counts as outside.
bool moved_within(std::span<const Int> x, std::span<const Int> g, Int gamma, std::span<const Int> lo,
                  std::span<const Int> hi, IntVector& out) {
    for (std::size_t j = 0; j < x.size(); ++j) {
        Int d, y;
        if (__builtin_mul_overflow(gamma, g[j], &d) || __builtin_add_overflow(x[j], d, &y)) return false;
        if (y < lo[j] || y > hi[j]) return false;
        out[j] = y;
    }
    return true;
}

}  // namespace

DpResult solve_dp(const AugmentationProblem& p, Int gamma) {
    if (gamma < 1) throw InputError("step size gamma must be >= 1");
    const StateSpace& z = *p.z;
    const std::size_t n = p.n, t = p.t, size = z.size();
    DpResult result{IntVector(n * t, 0), 0, true};
    if (size <= 1) return result;

    std::vector<Int> label(size, kUnreached), next(size, kUnreached);
    std::vector<std::uint32_t> pred_dense(size, 0);
    // preds[i] lists (state, predecessor) for states reached at layer i+1.
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> preds(n);
    std::vector<std::uint32_t> reach{static_cast<std::uint32_t>(z.zero_index())}, touched;
    label[z.zero_index()] = 0;

    std::vector<Arc> arcs;
    IntVector yi(t), sum(t);
    for (std::size_t i = 0; i < n; ++i) {
        auto xi = p.x.subspan(i * t, t);
        auto lo = p.lower.subspan(i * t, t);
        auto hi = p.upper.subspan(i * t, t);
        arcs.clear();
        for (std::size_t s = 0; s < size; ++s) {
            if (!moved_within(xi, z.state(s), gamma, lo, hi, yi)) continue;
            arcs.push_back({static_cast<std::uint32_t>(s), p.weights->weight(i, xi, yi)});
        }
        const bool last = i + 1 == n;
        touched.clear();
        for (std::uint32_t h : reach) {
            const Int base = label[h];
            auto hv = z.state(h);
            for (const Arc& arc : arcs) {
                auto g = z.state(arc.state);
                for (std::size_t j = 0; j < t; ++j) sum[j] = hv[j] + g[j];
                std::size_t idx = z.index_of(sum);
                if (idx == VectorSet::npos) continue;
                if (last && !p.terminals->mask[idx]) continue;
                const Int cand = checked_add(base, arc.weight);
                if (next[idx] == kUnreached) {
                    touched.push_back(static_cast<std::uint32_t>(idx));
                    next[idx] = cand;
                    pred_dense[idx] = h;
                } else if (cand < next[idx]) {
                    next[idx] = cand;
                    pred_dense[idx] = h;
                }
            }
        }
        std::sort(touched.begin(), touched.end());
        preds[i].reserve(touched.size());
        for (std::uint32_t idx : touched) preds[i].emplace_back(idx, pred_dense[idx]);
        for (std::uint32_t h : reach) label[h] = kUnreached;
        label.swap(next);
        reach.swap(touched);
        if (reach.empty()) return result;
    }

    std::uint32_t best = 0;
    Int best_label = kUnreached;
    for (std::uint32_t h : reach)
        if (label[h] < best_label) {
            best_label = label[h];
            best = h;
        }
    if (best_label >= 0) return result;

    std::uint32_t cur = best;
    for (std::size_t i = n; i-- > 0;) {
        const auto& layer = preds[i];
        auto it = std::lower_bound(layer.begin(), layer.end(), std::pair<std::uint32_t, std::uint32_t>(cur, 0));
        std::uint32_t prev = it->second;
        auto hv = z.state(cur), pv = z.state(prev);
        for (std::size_t j = 0; j < t; ++j) result.step[i * t + j] = hv[j] - pv[j];
        cur = prev;
    }
    result.weight = best_label;
    result.trivial = false;
    return result;
}

StepSizeSet critical_step_sizes(std::span<const Int> x, std::span<const Int> lower,
                                std::span<const Int> upper, std::size_t n, const StateSpace& z,
                                const PiecewiseObjective* pw) {
    const std::size_t t = z.dim();
    std::set<Int> gammas;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t s = 0; s < z.size(); ++s) {
            if (s == z.zero_index()) continue;
            auto g = z.state(s);
            Int gmax = std::numeric_limits<Int>::max();
            for (std::size_t j = 0; j < t; ++j) {
                const std::size_t k = i * t + j;
                if (g[j] > 0) gmax = std::min(gmax, floor_div(upper[k] - x[k], g[j]));
                if (g[j] < 0) gmax = std::min(gmax, floor_div(x[k] - lower[k], -g[j]));
            }
            if (gmax < 1) continue;
            gammas.insert(gmax);
            if (!pw) continue;
            for (std::size_t j = 0; j < t; ++j) {
                const auto* f = pw->function(i, j);
                if (!f || g[j] == 0) continue;
                const Int m = g[j] > 0 ? g[j] : -g[j];
                for (Int bp : f->breakpoints) {
                    // gamma with bp between x + gamma g and x + (gamma + 1) g.
                    const Int d = g[j] > 0 ? bp - x[i * t + j] : x[i * t + j] - bp;
                    const Int hi = std::min(gmax, floor_div(d, m));
                    const Int lo = std::max<Int>(1, floor_div(d + m - 1, m) - 1);
                    for (Int gamma = lo; gamma <= hi; ++gamma) gammas.insert(gamma);
                }
            }
        }
    }
    return {std::vector<Int>(gammas.begin(), gammas.end())};
}

std::optional<GraverBestStep> graver_best_step(const AugmentationProblem& p, const PiecewiseObjective* pw,
                                               std::size_t threads) {
    const StepSizeSet gammas = critical_step_sizes(p.x, p.lower, p.upper, p.n, *p.z, pw);
    const std::size_t count = gammas.gammas.size();
    if (count == 0) return std::nullopt;
    std::vector<DpResult> results(count);

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (std::size_t k = 0; k < count; ++k) results[k] = solve_dp(p, gammas.gammas[k]);
    } else {
        std::atomic<std::size_t> cursor{0};
        std::vector<std::exception_ptr> errors(threads);
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < threads; ++w)
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t k; (k = cursor.fetch_add(1)) < count;)
                        results[k] = solve_dp(p, gammas.gammas[k]);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    std::optional<GraverBestStep> best;
    for (std::size_t k = 0; k < count; ++k) {
        const DpResult& r = results[k];
        if (r.trivial) continue;
        // Ascending gamma order makes the first of equal deltas the smaller gamma.
        if (!best || r.weight < best->delta) best = GraverBestStep{gammas.gammas[k], r.step, r.weight};
    }
    return best;
}

}  // namespace nfold
