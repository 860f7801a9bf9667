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

#include "nfold/integer.hpp"

#include <algorithm>

namespace nfold {

Int dot(std::span<const Int> a, std::span<const Int> b) {
    Int acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc = checked_add(acc, checked_mul(a[i], b[i]));
    return acc;
}

Int norm_inf(std::span<const Int> v) {
    Int m = 0;
    for (Int x : v) m = std::max(m, checked_abs(x));
    return m;
}

Int norm_1(std::span<const Int> v) {
    Int acc = 0;
    for (Int x : v) acc = checked_add(acc, checked_abs(x));
    return acc;
}

bool is_zero(std::span<const Int> v) {
    return std::all_of(v.begin(), v.end(), [](Int x) { return x == 0; });
}

IntVector negated(std::span<const Int> v) {
    IntVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = checked_neg(v[i]);
    return out;
}

IntVector added(std::span<const Int> a, std::span<const Int> b) {
    IntVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = checked_add(a[i], b[i]);
    return out;
}

IntVector subtracted(std::span<const Int> a, std::span<const Int> b) {
    IntVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = checked_sub(a[i], b[i]);
    return out;
}

IntVector scaled(std::span<const Int> v, Int factor) {
    IntVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = checked_mul(v[i], factor);
    return out;
}

bool conformal_leq(std::span<const Int> a, std::span<const Int> b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        if (a[i] > 0 ? (b[i] < a[i]) : (b[i] > a[i])) return false;
    }
    return true;
}

IntegerMatrix::IntegerMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, 0) {}

IntegerMatrix::IntegerMatrix(std::size_t rows, std::size_t cols, IntVector entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_)
        throw InputError("matrix entry count " + std::to_string(entries_.size()) +
                         " does not match " + std::to_string(rows_) + "x" + std::to_string(cols_));
}

IntegerMatrix IntegerMatrix::from_rows(const std::vector<IntVector>& rows, std::size_t cols) {
    if (!rows.empty()) cols = rows.front().size();
    IntegerMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) throw InputError("ragged matrix rows");
        std::copy(rows[i].begin(), rows[i].end(), m.entries_.begin() + i * cols);
    }
    return m;
}

IntegerMatrix IntegerMatrix::from_rows(std::initializer_list<std::initializer_list<Int>> rows) {
    std::vector<IntVector> tmp;
    for (const auto& r : rows) tmp.emplace_back(r);
    return from_rows(tmp);
}

IntegerMatrix IntegerMatrix::from_columns(const std::vector<IntVector>& columns, std::size_t rows) {
    IntegerMatrix m(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (columns[j].size() != rows) throw InputError("ragged matrix columns");
        for (std::size_t i = 0; i < rows; ++i) m(i, j) = columns[j][i];
    }
    return m;
}

IntegerMatrix IntegerMatrix::identity(std::size_t n) {
    IntegerMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

IntegerMatrix IntegerMatrix::zero(std::size_t rows, std::size_t cols) { return {rows, cols}; }

IntVector IntegerMatrix::column(std::size_t j) const {
    IntVector out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
}

IntVector IntegerMatrix::multiply(std::span<const Int> v) const {
    if (v.size() != cols_) throw InputError("matrix-vector dimension mismatch");
    IntVector out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = dot(row(i), v);
    return out;
}

IntegerMatrix IntegerMatrix::multiply(const IntegerMatrix& other) const {
    if (other.rows_ != cols_) throw InputError("matrix-matrix dimension mismatch");
    IntegerMatrix out(rows_, other.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            Int a = (*this)(i, k);
            if (a == 0) continue;
            for (std::size_t j = 0; j < other.cols_; ++j)
                out(i, j) = checked_add(out(i, j), checked_mul(a, other(k, j)));
        }
    return out;
}

bool IntegerMatrix::annihilates(std::span<const Int> v) const {
    if (v.size() != cols_) throw InputError("matrix-vector dimension mismatch");
    for (std::size_t i = 0; i < rows_; ++i)
        if (dot(row(i), v) != 0) return false;
    return true;
}

IntegerMatrix IntegerMatrix::hstack(const IntegerMatrix& other) const {
    if (other.rows_ != rows_) throw InputError("hstack row mismatch");
    IntegerMatrix out(rows_, cols_ + other.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j);
        for (std::size_t j = 0; j < other.cols_; ++j) out(i, cols_ + j) = other(i, j);
    }
    return out;
}

IntegerMatrix IntegerMatrix::vstack(const IntegerMatrix& other) const {
    if (other.cols_ != cols_) throw InputError("vstack column mismatch");
    IntVector e = entries_;
    e.insert(e.end(), other.entries_.begin(), other.entries_.end());
    return {rows_ + other.rows_, cols_, std::move(e)};
}

Int IntegerMatrix::max_abs_entry() const { return norm_inf(entries_); }

void Bimatrix::validate() const {
    if (a2.cols() < 1) throw InputError("bimatrix needs t >= 1 columns");
    if (a2.rows() < 1) throw InputError("bimatrix needs s >= 1 rows in A2");
    if (a1.cols() != a2.cols())
        throw InputError("bimatrix blocks disagree on column count: A1 has " +
                         std::to_string(a1.cols()) + ", A2 has " + std::to_string(a2.cols()));
}

}  // namespace nfold
