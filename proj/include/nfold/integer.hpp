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

#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nfold {

using Int = std::int64_t;
using IntVector = std::vector<Int>;

// Base of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Exact arithmetic would have left the 64-bit range.
class OverflowError : public Error {
  public:
    using Error::Error;
};

// Malformed or inconsistent input (dimensions, bounds, infeasible start points).
class InputError : public Error {
  public:
    using Error::Error;
};

// A configured budget was exceeded. `limit` names the budget, `hint` the
// option that lifts or sidesteps it (may be empty).
class ResourceLimitError : public Error {
  public:
    ResourceLimitError(std::string limit, std::string hint, const std::string& what)
        : Error(what), limit_(std::move(limit)), hint_(std::move(hint)) {}

    const std::string& limit() const noexcept { return limit_; }
    const std::string& hint() const noexcept { return hint_; }

  private:
    std::string limit_;
    std::string hint_;
};

inline Int checked_add(Int a, Int b) {
    Int out;
    if (__builtin_add_overflow(a, b, &out)) throw OverflowError("integer overflow in addition");
    return out;
}

inline Int checked_sub(Int a, Int b) {
    Int out;
    if (__builtin_sub_overflow(a, b, &out)) throw OverflowError("integer overflow in subtraction");
    return out;
}

inline Int checked_mul(Int a, Int b) {
    Int out;
    if (__builtin_mul_overflow(a, b, &out)) throw OverflowError("integer overflow in multiplication");
    return out;
}

inline Int checked_neg(Int a) { return checked_sub(0, a); }

inline Int checked_abs(Int a) { return a < 0 ? checked_neg(a) : a; }

// Floor division for b > 0.
inline Int floor_div(Int a, Int b) {
    Int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

Int dot(std::span<const Int> a, std::span<const Int> b);
Int norm_inf(std::span<const Int> v);
Int norm_1(std::span<const Int> v);
bool is_zero(std::span<const Int> v);
IntVector negated(std::span<const Int> v);
IntVector added(std::span<const Int> a, std::span<const Int> b);
IntVector subtracted(std::span<const Int> a, std::span<const Int> b);
IntVector scaled(std::span<const Int> v, Int factor);

// Conformal order: a ⊑ b iff a_i b_i >= 0 and |a_i| <= |b_i| for all i.
bool conformal_leq(std::span<const Int> a, std::span<const Int> b);

// Dense row-major integer matrix with exact (overflow-checked) products.
class IntegerMatrix {
  public:
    IntegerMatrix() = default;
    IntegerMatrix(std::size_t rows, std::size_t cols);
    IntegerMatrix(std::size_t rows, std::size_t cols, IntVector entries);

    static IntegerMatrix from_rows(const std::vector<IntVector>& rows, std::size_t cols = 0);
    static IntegerMatrix from_rows(std::initializer_list<std::initializer_list<Int>> rows);
    static IntegerMatrix from_columns(const std::vector<IntVector>& columns, std::size_t rows);
    static IntegerMatrix identity(std::size_t n);
    static IntegerMatrix zero(std::size_t rows, std::size_t cols);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    const IntVector& entries() const noexcept { return entries_; }

    Int operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
    Int& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }

    std::span<const Int> row(std::size_t i) const {
        return {entries_.data() + i * cols_, cols_};
    }
    IntVector column(std::size_t j) const;

    IntVector multiply(std::span<const Int> v) const;
    IntegerMatrix multiply(const IntegerMatrix& other) const;
    bool annihilates(std::span<const Int> v) const;

    // [this | other], rows must agree.
    IntegerMatrix hstack(const IntegerMatrix& other) const;
    // [this ; other], columns must agree.
    IntegerMatrix vstack(const IntegerMatrix& other) const;

    Int max_abs_entry() const;

    friend bool operator==(const IntegerMatrix&, const IntegerMatrix&) = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    IntVector entries_;
};

// The pair (A1, A2) of an (r,s) x t bimatrix. A1 may have zero rows.
struct Bimatrix {
    IntegerMatrix a1;
    IntegerMatrix a2;

    std::size_t r() const noexcept { return a1.rows(); }
    std::size_t s() const noexcept { return a2.rows(); }
    std::size_t t() const noexcept { return a2.cols(); }

    // Throws InputError unless a1.cols == a2.cols == t >= 1 and s >= 1.
    void validate() const;

    friend bool operator==(const Bimatrix&, const Bimatrix&) = default;
};

// Lexicographic order on equal-length vectors.
struct LexLess {
    bool operator()(const IntVector& a, const IntVector& b) const { return a < b; }
};

}  // namespace nfold
