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
#include <iosfwd>
#include <string>
#include <vector>

#include "nfold/integer.hpp"
#include "nfold/json_io.hpp"

namespace nfold::cli {

// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kInputError = 1,
    kResourceLimit = 2,
    kOracleMismatch = 3,
    kInternalError = 4,
};

struct BenchOptions {
    std::string fixture = "tiny";
    std::vector<std::size_t> ns{50, 100, 200, 400};
    std::uint64_t seed = 1;
    Int width = 4;  // every variable lives in [0, width]
    std::size_t threads = 1;
};

struct BenchRow {
    std::size_t n = 0;
    std::size_t iterations = 0;
    double total_ms = 0;
    // Time per Graver-best search, iterations + 1 of them per run.
    double per_iteration_ms = 0;
    Int start_objective = 0;
    Int final_objective = 0;
};

struct BenchReport {
    BenchOptions options;
    std::size_t states = 0;
    Int graver_complexity = 0;
    std::vector<BenchRow> rows;
};

std::vector<std::string> bench_fixtures();
Bimatrix bench_fixture(const std::string& name);

// For each n: a random point x* in the box, b = A x*, random weights, then
// augmentation from x*. The state space is built before timing starts.
BenchReport run_bench(const BenchOptions& options);
io::Json to_json(const BenchReport& r);

// Entry point of the command-line tool. Reports go to `out` (or the file
// named by --output), summaries and diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nfold::cli
