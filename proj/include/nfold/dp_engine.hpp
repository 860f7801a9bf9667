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
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "nfold/instance.hpp"
#include "nfold/integer.hpp"
#include "nfold/state_space.hpp"

namespace nfold {

// Value of the objective restricted to brick i at brick point xi.
using BrickEvaluator = std::function<Int(std::size_t brick, std::span<const Int> xi)>;

// Weight of moving brick i from xi to yi = xi + gamma g^i.
class ArcWeightModel {
  public:
    enum class Kind { Linear, ConvexDelta };

    static ArcWeightModel linear(IntVector w, std::size_t t);
    static ArcWeightModel convex_delta(BrickEvaluator f);
    static ArcWeightModel for_objective(const Objective& f, std::size_t t);

    Kind kind() const noexcept { return kind_; }
    Int weight(std::size_t brick, std::span<const Int> xi, std::span<const Int> yi) const;

  private:
    Kind kind_ = Kind::Linear;
    std::size_t t_ = 0;
    IntVector w_;
    BrickEvaluator f_;
};

// Everything one augmentation round looks at. Spans and pointers are
// borrowed and must outlive the calls below.
struct AugmentationProblem {
    std::size_t n = 0;
    std::size_t t = 0;
    std::span<const Int> x;
    std::span<const Int> lower;
    std::span<const Int> upper;
    const StateSpace* z = nullptr;
    const TerminalStates* terminals = nullptr;
    const ArcWeightModel* weights = nullptr;
};

struct DpResult {
    IntVector step;   // length n t, unscaled
    Int weight = 0;   // objective change of x -> x + gamma step
    bool trivial = true;
};

struct StepSizeSet {
    std::vector<Int> gammas;  // ascending, distinct
};

struct GraverBestStep {
    Int gamma = 1;
    IntVector step;
    Int delta = 0;
};

// Minimum-weight path through the layered state digraph for a fixed gamma.
// A result of weight >= 0 is reported as the trivial step.
DpResult solve_dp(const AugmentationProblem& p, Int gamma);

// For each brick i and nonzero state z, the largest gamma keeping
// x^i + gamma z inside the bounds; with `pw`, also every gamma at which some
// coordinate passes a breakpoint between gamma and gamma + 1.
StepSizeSet critical_step_sizes(std::span<const Int> x, std::span<const Int> lower,
                                std::span<const Int> upper, std::size_t n, const StateSpace& z,
                                const PiecewiseObjective* pw = nullptr);

// Best (gamma, step) over all gamma in the critical set, or nullopt when no
// step strictly improves. `threads` = 0 picks the hardware concurrency.
std::optional<GraverBestStep> graver_best_step(const AugmentationProblem& p,
                                               const PiecewiseObjective* pw = nullptr,
                                               std::size_t threads = 1);

}  // namespace nfold
