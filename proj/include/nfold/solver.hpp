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
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nfold/dp_engine.hpp"
#include "nfold/graver.hpp"
#include "nfold/instance.hpp"
#include "nfold/state_space.hpp"

namespace nfold {

enum class SolveStatus { Optimal, Infeasible, HeuristicFeasible };

const char* to_string(SolveStatus s);

struct TraceEntry {
    Int gamma = 0;
    Int step_norm = 0;  // ||gamma g||_1
    Int objective = 0;  // after the step

    friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

struct SolveReport {
    SolveStatus status = SolveStatus::Infeasible;
    std::optional<IntVector> point;
    Int objective_value = 0;
    std::size_t iterations = 0;
    std::vector<TraceEntry> trace;
    bool exact = true;

    friend bool operator==(const SolveReport&, const SolveReport&) = default;
};

struct Certificate {
    enum class Verdict { Optimal, Improvable };
    Verdict verdict = Verdict::Optimal;
    IntVector step;  // empty when Optimal
    Int delta = 0;   // f(x + step) - f(x)

    bool optimal() const noexcept { return verdict == Verdict::Optimal; }
};

// How the feasibility program attaches slack to the equations.
enum class AuxiliaryForm {
    // One pair of nonnegative slacks per row with opposite signs, in every
    // brick.
    Paired,
    // One free slack per row with |.| cost. The slack of the A1 rows lives in
    // one extra trailing brick whose other variables are fixed at 0, so only
    // the last DP layer ever moves it. Same verdict as Paired with a far
    // smaller state set.
    Folded,
};

struct SolveOptions {
    std::size_t threads = 1;  // 0 = hardware concurrency
    std::optional<std::size_t> iteration_cap;  // default 10 n L + 100
    GraverBudget graver_budget;
    StateSpaceBudget state_budget;
    AuxiliaryForm auxiliary = AuxiliaryForm::Folded;
    // When g of the auxiliary bimatrix is out of budget, feasibility is
    // searched over degree 1, 2, 4, ... up to this bound. A point found this
    // way is feasible; failing to find one is reported as a resource error,
    // never as Infeasible.
    Int max_auxiliary_degree = 16;
    // Budget for the Graver complexity of the auxiliary bimatrix. It is only
    // needed to prove infeasibility, and is frequently far larger than g of
    // the instance itself, so it gets its own, tighter limit.
    GraverBudget auxiliary_graver_budget{200000, Int{1} << 20, 400000};
    // If that budget is exceeded, the feasibility program may instead use
    // every state whose original part fits the summed variable widths, as
    // long as there are at most this many.
    std::size_t max_box_states = 300000;
    // In approximate mode, re-certify the final point against the exact
    // state space before reporting it.
    bool certify_exact = false;
};

struct FeasibilityResult {
    std::optional<IntVector> point;
    SolveReport auxiliary;  // run of the auxiliary program
};

// The auxiliary feasibility program of an instance together with its
// starting point. `x_part` maps auxiliary points back to the original.
struct AuxiliaryProgram {
    NFoldInstance instance;
    IntVector start;
    AuxiliaryForm form = AuxiliaryForm::Folded;
    std::size_t original_t = 0;
    std::size_t original_n = 0;
    Bimatrix original;

    IntVector x_part(std::span<const Int> aux_point) const;
};

AuxiliaryProgram auxiliary_program(const NFoldInstance& inst, AuxiliaryForm form);

class Solver {
  public:
    explicit Solver(SolveOptions options = {});

    const SolveOptions& options() const noexcept { return options_; }

    // Z(A) for the instance's bimatrix, or Z_d(A) in approximate mode.
    std::shared_ptr<const StateSpace> state_space_for(const NFoldInstance& inst);
    Int graver_complexity_for(const NFoldInstance& inst);

    Certificate certify_optimal(const NFoldInstance& inst, std::span<const Int> x);
    // Certification with the objective given only through per-brick values.
    Certificate certify_optimal(const NFoldInstance& inst, std::span<const Int> x, BrickEvaluator f);

    // Results are memoized per (bimatrix, n, b, l, u); the objective plays
    // no part.
    FeasibilityResult find_feasible(const NFoldInstance& inst);
    SolveReport augment_to_optimal(const NFoldInstance& inst, std::span<const Int> x0);
    SolveReport solve(const NFoldInstance& inst);

    std::size_t iteration_cap(const NFoldInstance& inst) const;

  private:
    struct Space {
        std::shared_ptr<const StateSpace> z;
        std::shared_ptr<const TerminalStates> terminals;
    };

    Space space_for(const NFoldInstance& inst, bool force_exact);
    // States of the folded auxiliary program that any bound-respecting path
    // can visit: zero A1 slack, or slack cancelling A1 x (terminal).
    Space auxiliary_space(const AuxiliaryProgram& aux, Int degree, bool exact);
    std::optional<Int> auxiliary_complexity(const AuxiliaryProgram& aux);
    // Exact state set for the folded program derived from the bounds alone.
    std::optional<Space> box_space(const AuxiliaryProgram& aux);
    // Upper estimate of the box set's size before deduplication.
    double box_estimate(const AuxiliaryProgram& aux) const;
    FeasibilityResult decide_feasibility(const NFoldInstance& inst);
    SolveReport augment(const NFoldInstance& inst, std::span<const Int> x0, const Space& space,
                        std::optional<Int> floor);
    Certificate certify_with(const NFoldInstance& inst, std::span<const Int> x, const ArcWeightModel& weights,
                             const Space& space);

    SolveOptions options_;
    std::mutex mutex_;
    std::map<std::string, Int> complexity_cache_;
    std::map<std::string, std::optional<Int>> aux_complexity_cache_;
    std::map<std::string, Space> space_cache_;
    std::map<std::string, FeasibilityResult> feasibility_cache_;
};

}  // namespace nfold
