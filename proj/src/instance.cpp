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

#include "nfold/instance.hpp"

#include <algorithm>
#include <bit>
#include <string>

namespace nfold {

std::size_t PiecewiseFunction::piece_of(Int v) const {
    return static_cast<std::size_t>(std::lower_bound(breakpoints.begin(), breakpoints.end(), v) -
                                    breakpoints.begin());
}

Int PiecewiseFunction::evaluate(Int v) const {
    std::size_t p = piece_of(v);
    return checked_add(checked_mul(slopes[p], v), intercepts[p]);
}

void PiecewiseFunction::validate() const {
    if (slopes.empty()) throw InputError("piecewise function needs at least one piece");
    if (slopes.size() != intercepts.size())
        throw InputError("piecewise function has " + std::to_string(slopes.size()) + " slopes but " +
                         std::to_string(intercepts.size()) + " intercepts");
    if (breakpoints.size() + 1 != slopes.size())
        throw InputError("piecewise function with " + std::to_string(slopes.size()) +
                         " pieces needs " + std::to_string(slopes.size() - 1) + " breakpoints, got " +
                         std::to_string(breakpoints.size()));
    for (std::size_t k = 0; k + 1 < slopes.size(); ++k) {
        if (k > 0 && breakpoints[k] <= breakpoints[k - 1])
            throw InputError("piecewise breakpoints must be strictly increasing");
        if (slopes[k + 1] < slopes[k])
            throw InputError("piecewise function is not convex: slope " + std::to_string(slopes[k]) +
                             " followed by " + std::to_string(slopes[k + 1]));
        Int bp = breakpoints[k];
        Int left = checked_add(checked_mul(slopes[k], bp), intercepts[k]);
        Int right = checked_add(checked_mul(slopes[k + 1], bp), intercepts[k + 1]);
        if (left != right)
            throw InputError("piecewise function is discontinuous at breakpoint " + std::to_string(bp));
    }
}

PiecewiseObjective::PiecewiseObjective(std::size_t n, std::size_t t, std::vector<PiecewiseTerm> terms,
                                       std::size_t max_pieces)
    : n_(n), t_(t), max_pieces_(max_pieces), terms_(std::move(terms)), lookup_(n * t, -1) {
    std::sort(terms_.begin(), terms_.end(), [](const PiecewiseTerm& a, const PiecewiseTerm& b) {
        return std::pair(a.brick, a.coord) < std::pair(b.brick, b.coord);
    });
    for (std::size_t k = 0; k < terms_.size(); ++k) {
        const auto& term = terms_[k];
        if (term.brick >= n || term.coord >= t)
            throw InputError("piecewise term (" + std::to_string(term.brick) + ", " +
                             std::to_string(term.coord) + ") outside " + std::to_string(n) + " bricks of " +
                             std::to_string(t) + " coordinates");
        term.f.validate();
        if (term.f.pieces() > max_pieces)
            throw InputError("piecewise term (" + std::to_string(term.brick) + ", " +
                             std::to_string(term.coord) + ") has " + std::to_string(term.f.pieces()) +
                             " pieces, more than the declared maximum " + std::to_string(max_pieces));
        auto& slot = lookup_[term.brick * t + term.coord];
        if (slot >= 0)
            throw InputError("duplicate piecewise term (" + std::to_string(term.brick) + ", " +
                             std::to_string(term.coord) + ")");
        slot = static_cast<std::ptrdiff_t>(k);
    }
}

const PiecewiseFunction* PiecewiseObjective::function(std::size_t brick, std::size_t coord) const {
    auto k = lookup_[brick * t_ + coord];
    return k < 0 ? nullptr : &terms_[static_cast<std::size_t>(k)].f;
}

Int PiecewiseObjective::evaluate_brick(std::size_t brick, std::span<const Int> xi) const {
    Int acc = 0;
    for (std::size_t j = 0; j < t_; ++j)
        if (const auto* f = function(brick, j)) acc = checked_add(acc, f->evaluate(xi[j]));
    return acc;
}

Int PiecewiseObjective::evaluate(std::span<const Int> x) const {
    Int acc = 0;
    for (std::size_t i = 0; i < n_; ++i) acc = checked_add(acc, evaluate_brick(i, x.subspan(i * t_, t_)));
    return acc;
}

Int evaluate_objective(const Objective& f, std::span<const Int> x) {
    if (const auto* lin = std::get_if<LinearObjective>(&f)) return dot(lin->w, x);
    return std::get<PiecewiseObjective>(f).evaluate(x);
}

Int evaluate_objective_brick(const Objective& f, std::size_t brick, std::size_t t,
                             std::span<const Int> xi) {
    if (const auto* lin = std::get_if<LinearObjective>(&f))
        return dot(std::span<const Int>(lin->w).subspan(brick * t, t), xi);
    return std::get<PiecewiseObjective>(f).evaluate_brick(brick, xi);
}

void NFoldInstance::validate() const {
    bimatrix.validate();
    if (n < 1) throw InputError("n must be >= 1");
    const std::size_t r = bimatrix.r(), s = bimatrix.s(), t = bimatrix.t();
    if (b.size() != r + n * s)
        throw InputError("b has length " + std::to_string(b.size()) + ", expected r + n s = " +
                         std::to_string(r + n * s));
    if (l.size() != n * t || u.size() != n * t)
        throw InputError("bounds must have length n t = " + std::to_string(n * t));
    for (std::size_t k = 0; k < l.size(); ++k)
        if (l[k] > u[k])
            throw InputError("empty bound interval at coordinate " + std::to_string(k) + ": l = " +
                             std::to_string(l[k]) + " > u = " + std::to_string(u[k]));
    if (const auto* lin = std::get_if<LinearObjective>(&objective)) {
        if (lin->w.size() != n * t)
            throw InputError("linear objective has length " + std::to_string(lin->w.size()) +
                             ", expected n t = " + std::to_string(n * t));
    } else {
        const auto& pw = std::get<PiecewiseObjective>(objective);
        if (pw.n() != n || pw.t() != t) throw InputError("piecewise objective shape does not match n, t");
    }
    if (graver_complexity_override && *graver_complexity_override < 0)
        throw InputError("graver complexity override must be >= 0");
    if (degree && *degree < 1) throw InputError("degree must be >= 1");
}

IntVector NFoldInstance::constraint_lhs(std::span<const Int> x) const {
    const std::size_t r = bimatrix.r(), s = bimatrix.s(), t = bimatrix.t();
    if (x.size() != n * t) throw InputError("point has length " + std::to_string(x.size()) +
                                            ", expected " + std::to_string(n * t));
    IntVector out(r + n * s, 0);
    for (std::size_t i = 0; i < n; ++i) {
        auto xi = x.subspan(i * t, t);
        for (std::size_t k = 0; k < r; ++k) out[k] = checked_add(out[k], dot(bimatrix.a1.row(k), xi));
        for (std::size_t k = 0; k < s; ++k) out[r + i * s + k] = dot(bimatrix.a2.row(k), xi);
    }
    return out;
}

bool NFoldInstance::is_feasible(std::span<const Int> x) const {
    if (x.size() != n * bimatrix.t()) return false;
    for (std::size_t k = 0; k < x.size(); ++k)
        if (x[k] < l[k] || x[k] > u[k]) return false;
    return constraint_lhs(x) == b;
}

namespace {

Int bits(Int v) {
    auto m = static_cast<std::uint64_t>(v < 0 ? -(v + 1) + 1 : v);
    return 1 + static_cast<Int>(std::bit_width(m));
}

Int bits(std::span<const Int> v) {
    Int acc = 0;
    for (Int x : v) acc += bits(x);
    return acc;
}

}  // namespace

Int NFoldInstance::binary_length() const {
    Int acc = bits(bimatrix.a1.entries()) + bits(bimatrix.a2.entries()) + bits(b) + bits(l) + bits(u);
    if (const auto* lin = std::get_if<LinearObjective>(&objective)) {
        acc += bits(lin->w);
    } else {
        for (const auto& term : std::get<PiecewiseObjective>(objective).terms())
            acc += bits(term.f.breakpoints) + bits(term.f.slopes) + bits(term.f.intercepts);
    }
    return acc;
}

}  // namespace nfold
