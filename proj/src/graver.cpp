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

#include "nfold/graver.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <set>
#include <utility>

namespace nfold {

bool GraverBasis::contains(const IntVector& v) const {
    return std::binary_search(elements.begin(), elements.end(), v);
}

IntegerMatrix GraverBasis::as_columns() const { return IntegerMatrix::from_columns(elements, dim); }

namespace {

void column_axpy(IntegerMatrix& m, std::size_t dst, std::size_t src, Int factor) {
    if (factor == 0) return;
    for (std::size_t i = 0; i < m.rows(); ++i)
        m(i, dst) = checked_sub(m(i, dst), checked_mul(factor, m(i, src)));
}

void column_swap(IntegerMatrix& m, std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}

void column_negate(IntegerMatrix& m, std::size_t j) {
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, j) = checked_neg(m(i, j));
}

// Pairwise size reduction of a lattice basis; unimodular, so the lattice is
// unchanged. Smaller seeds keep the completion short.
void size_reduce(std::vector<IntVector>& basis) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < basis.size(); ++i)
            for (std::size_t j = 0; j < basis.size(); ++j) {
                if (i == j) continue;
                Int current = norm_1(basis[i]);
                IntVector plus = added(basis[i], basis[j]);
                IntVector minus = subtracted(basis[i], basis[j]);
                if (norm_1(plus) < current) {
                    basis[i] = std::move(plus);
                    changed = true;
                } else if (norm_1(minus) < current) {
                    basis[i] = std::move(minus);
                    changed = true;
                }
            }
    }
}

class Completion {
  public:
    Completion(std::size_t dim, const GraverBudget& budget)
        : dim_(dim), words_((dim + 63) / 64), budget_(budget) {}

    void seed(const IntVector& v) { admit(v); }

    // Pairs (i, j), j < i, are visited once each as the working set grows;
    // only sums of sign-incompatible pairs can reduce to something new.
    void run() {
        std::size_t steps = 0;
        IntVector sum(dim_);
        for (std::size_t i = 1; i < size(); ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                if (sign_compatible(i, j)) continue;
                if (++steps > budget_.max_pending)
                    throw ResourceLimitError("max_pending", "--max-pending",
                                             "Graver completion exceeded " +
                                                 std::to_string(budget_.max_pending) +
                                                 " pair reductions");
                auto a = vec(i), b = vec(j);
                for (std::size_t k = 0; k < dim_; ++k) sum[k] = checked_add(a[k], b[k]);
                reduce(sum);
                if (!is_zero(sum)) admit(sum);
            }
        }
    }

    std::vector<IntVector> minimal_elements() const {
        std::vector<IntVector> out;
        for (std::size_t i = 0; i < size(); ++i) {
            bool dominated = false;
            for (std::size_t j = 0; j < size() && !dominated; ++j)
                dominated = j != i && norm_[j] <= norm_[i] && divides(j, i) && !std::equal(
                    vec(i).begin(), vec(i).end(), vec(j).begin());
            if (!dominated) out.emplace_back(vec(i).begin(), vec(i).end());
        }
        std::sort(out.begin(), out.end());
        return out;
    }

  private:
    std::size_t size() const { return norm_.size(); }
    std::span<const Int> vec(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
    const std::uint64_t* pos(std::size_t i) const { return masks_.data() + 2 * i * words_; }
    const std::uint64_t* neg(std::size_t i) const { return pos(i) + words_; }

    bool sign_compatible(std::size_t i, std::size_t j) const {
        for (std::size_t w = 0; w < words_; ++w)
            if ((pos(i)[w] & neg(j)[w]) || (neg(i)[w] & pos(j)[w])) return false;
        return true;
    }

    // vec(g) ⊑ vec(s), both stored.
    bool divides(std::size_t g, std::size_t s) const {
        for (std::size_t w = 0; w < words_; ++w)
            if ((pos(g)[w] & ~pos(s)[w]) || (neg(g)[w] & ~neg(s)[w])) return false;
        return conformal_leq(vec(g), vec(s));
    }

    void signs(std::span<const Int> v, std::uint64_t* p, std::uint64_t* n) const {
        std::fill(p, p + words_, 0);
        std::fill(n, n + words_, 0);
        for (std::size_t k = 0; k < dim_; ++k) {
            if (v[k] > 0) p[k / 64] |= std::uint64_t{1} << (k % 64);
            if (v[k] < 0) n[k / 64] |= std::uint64_t{1} << (k % 64);
        }
    }

    // Subtracting g ⊑ s leaves s - g ⊑ s, and anything not below s is not
    // below s - g either, so one pass over the working set suffices.
    void reduce(IntVector& s) const {
        std::vector<std::uint64_t> sp(words_), sn(words_);
        signs(s, sp.data(), sn.data());
        Int s_norm = norm_1(s);
        for (std::size_t g = 0; g < size() && s_norm > 0; ++g) {
            if (norm_[g] > s_norm) continue;
            bool fits = true;
            for (std::size_t w = 0; w < words_ && fits; ++w)
                fits = !(pos(g)[w] & ~sp[w]) && !(neg(g)[w] & ~sn[w]);
            if (!fits) continue;
            auto gv = vec(g);
            while (norm_[g] <= s_norm && conformal_leq(gv, s)) {
                for (std::size_t k = 0; k < dim_; ++k) s[k] -= gv[k];
                s_norm -= norm_[g];
            }
            signs(s, sp.data(), sn.data());
        }
    }

    void admit(const IntVector& v) {
        if (!seen_.insert(v).second) return;
        if (norm_inf(v) > budget_.max_norm)
            throw ResourceLimitError("max_norm", "--max-norm",
                                     "Graver completion exceeded the norm budget of " +
                                         std::to_string(budget_.max_norm));
        if (size() + 1 > budget_.max_elements)
            throw ResourceLimitError("max_elements", "--max-elements",
                                     "Graver completion exceeded the element budget of " +
                                         std::to_string(budget_.max_elements));
        coords_.insert(coords_.end(), v.begin(), v.end());
        masks_.resize(masks_.size() + 2 * words_);
        signs(v, masks_.data() + masks_.size() - 2 * words_, masks_.data() + masks_.size() - words_);
        norm_.push_back(norm_1(v));
    }

    std::size_t dim_;
    std::size_t words_;
    GraverBudget budget_;
    IntVector coords_;
    std::vector<std::uint64_t> masks_;  // per element: positive-support words, then negative
    IntVector norm_;
    std::set<IntVector> seen_;
};

// Columns grouped by equality up to sign. Repeated columns do not change
// the Graver basis in any essential way: the basis of [C | c | c] is the
// basis of [C | c] with each c-coordinate split conformally over the
// copies, plus the pair vectors ±(e_c - e_c'). Zero columns contribute ±e.
struct ColumnClasses {
    struct Member {
        std::size_t column;
        Int sign;
    };
    std::vector<std::vector<Member>> classes;  // one per distinct nonzero column
    std::vector<std::size_t> zero_columns;
    IntegerMatrix reduced;                     // one representative column per class

    explicit ColumnClasses(const IntegerMatrix& m) {
        std::vector<IntVector> reps;
        for (std::size_t j = 0; j < m.cols(); ++j) {
            IntVector col = m.column(j);
            if (is_zero(col)) {
                zero_columns.push_back(j);
                continue;
            }
            Int sign = 1;
            for (Int x : col)
                if (x != 0) {
                    sign = x > 0 ? 1 : -1;
                    break;
                }
            if (sign < 0) col = negated(col);
            auto it = std::find(reps.begin(), reps.end(), col);
            if (it == reps.end()) {
                reps.push_back(col);
                classes.push_back({{j, sign}});
            } else {
                classes[static_cast<std::size_t>(it - reps.begin())].push_back({j, sign});
            }
        }
        reduced = IntegerMatrix::from_columns(reps, m.rows());
    }

    bool has_repeats() const {
        return std::any_of(classes.begin(), classes.end(),
                           [](const auto& c) { return c.size() > 1; });
    }
};

// All ways to write `total` (>= 0) as an ordered sum of `parts` nonnegative
// integers.
void compositions(Int total, std::size_t parts, IntVector& current,
                  std::vector<IntVector>& out) {
    if (parts == 1) {
        current.push_back(total);
        out.push_back(current);
        current.pop_back();
        return;
    }
    for (Int first = total; first >= 0; --first) {
        current.push_back(first);
        compositions(total - first, parts - 1, current, out);
        current.pop_back();
    }
}

void expand_splits(const ColumnClasses& cc, const IntVector& reduced_element, std::size_t dim,
                   const GraverBudget& budget, std::vector<IntVector>& out) {
    std::vector<std::vector<IntVector>> per_class(cc.classes.size());
    for (std::size_t c = 0; c < cc.classes.size(); ++c) {
        IntVector scratch;
        compositions(checked_abs(reduced_element[c]), cc.classes[c].size(), scratch, per_class[c]);
    }
    IntVector v(dim, 0);
    std::vector<std::size_t> choice(cc.classes.size(), 0);
    while (true) {
        std::fill(v.begin(), v.end(), 0);
        for (std::size_t c = 0; c < cc.classes.size(); ++c) {
            Int direction = reduced_element[c] < 0 ? -1 : 1;
            const IntVector& parts = per_class[c][choice[c]];
            for (std::size_t k = 0; k < parts.size(); ++k) {
                const auto& member = cc.classes[c][k];
                v[member.column] = direction * member.sign * parts[k];
            }
        }
        out.push_back(v);
        if (out.size() > budget.max_elements)
            throw ResourceLimitError("max_elements", "--max-elements",
                                     "Graver basis exceeded the element budget of " +
                                         std::to_string(budget.max_elements));
        std::size_t c = 0;
        while (c < choice.size() && ++choice[c] == per_class[c].size()) choice[c++] = 0;
        if (c == choice.size()) break;
    }
}

GraverBasis reduced_graver_basis(const IntegerMatrix& m, const GraverBudget& budget) {
    GraverBasis out;
    out.dim = m.cols();
    auto basis = kernel_lattice_basis(m);
    if (basis.empty()) return out;
    Completion completion(m.cols(), budget);
    for (const auto& b : basis) {
        completion.seed(b);
        completion.seed(negated(b));
    }
    completion.run();
    out.elements = completion.minimal_elements();
    return out;
}

}  // namespace

std::vector<IntVector> kernel_lattice_basis(const IntegerMatrix& m) {
    const std::size_t cols = m.cols();
    IntegerMatrix work = m;
    IntegerMatrix unimodular = IntegerMatrix::identity(cols);
    std::size_t pivot = 0;
    for (std::size_t i = 0; i < m.rows() && pivot < cols; ++i) {
        // Euclid on the columns pivot..cols-1 of row i.
        while (true) {
            std::size_t best = cols;
            for (std::size_t j = pivot; j < cols; ++j) {
                if (work(i, j) == 0) continue;
                if (best == cols || checked_abs(work(i, j)) < checked_abs(work(i, best))) best = j;
            }
            if (best == cols) break;
            bool others = false;
            for (std::size_t j = pivot; j < cols; ++j) {
                if (j == best || work(i, j) == 0) continue;
                Int q = work(i, j) / work(i, best);
                column_axpy(work, j, best, q);
                column_axpy(unimodular, j, best, q);
                if (work(i, j) != 0) others = true;
            }
            if (!others) {
                if (work(i, best) < 0) {
                    column_negate(work, best);
                    column_negate(unimodular, best);
                }
                column_swap(work, pivot, best);
                column_swap(unimodular, pivot, best);
                ++pivot;
                break;
            }
        }
    }
    std::vector<IntVector> basis;
    for (std::size_t j = pivot; j < cols; ++j) basis.push_back(unimodular.column(j));
    size_reduce(basis);
    return basis;
}

GraverBasis graver_basis(const IntegerMatrix& m, const GraverBudget& budget) {
    ColumnClasses cc(m);
    GraverBasis core = reduced_graver_basis(cc.reduced, budget);
    GraverBasis out;
    out.dim = m.cols();
    for (const auto& e : core.elements) expand_splits(cc, e, m.cols(), budget, out.elements);
    for (const auto& cls : cc.classes)
        for (std::size_t a = 0; a < cls.size(); ++a)
            for (std::size_t b = a + 1; b < cls.size(); ++b) {
                IntVector v(m.cols(), 0);
                v[cls[a].column] = cls[a].sign;
                v[cls[b].column] = -cls[b].sign;
                out.elements.push_back(v);
                out.elements.push_back(negated(v));
            }
    for (std::size_t z : cc.zero_columns) {
        IntVector v(m.cols(), 0);
        v[z] = 1;
        out.elements.push_back(v);
        v[z] = -1;
        out.elements.push_back(v);
    }
    std::sort(out.elements.begin(), out.elements.end());
    return out;
}

IntegerMatrix n_fold_product(const Bimatrix& a, std::size_t n) {
    if (n < 1) throw InputError("n-fold product needs n >= 1");
    const std::size_t r = a.r(), s = a.s(), t = a.t();
    IntegerMatrix out(r + n * s, n * t);
    for (std::size_t block = 0; block < n; ++block) {
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < t; ++j) out(i, block * t + j) = a.a1(i, j);
        for (std::size_t i = 0; i < s; ++i)
            for (std::size_t j = 0; j < t; ++j) out(r + block * s + i, block * t + j) = a.a2(i, j);
    }
    return out;
}

GraverComplexity graver_complexity(const Bimatrix& a, const GraverBudget& budget) {
    a.validate();
    GraverBasis g2 = graver_basis(a.a2, budget);
    if (g2.empty()) return {0};
    IntegerMatrix linked = a.a1.multiply(g2.as_columns());
    // Column splitting preserves 1-norms, so the reduced basis suffices.
    ColumnClasses cc(linked);
    GraverBasis core = reduced_graver_basis(cc.reduced, budget);
    Int best = cc.zero_columns.empty() ? 0 : 1;
    if (cc.has_repeats()) best = std::max<Int>(best, 2);
    for (const auto& v : core.elements) best = std::max(best, norm_1(v));
    return {best};
}

}  // namespace nfold
