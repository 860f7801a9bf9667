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

// JSON forms of instances, reports and models. Every number must be an exact
// integer; errors name the offending field ("b[3]", "bimatrix.a1.entries").

#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "nfold/graver.hpp"
#include "nfold/instance.hpp"
#include "nfold/models.hpp"
#include "nfold/solver.hpp"
#include "nfold/state_space.hpp"

namespace nfold::io {

using Json = nlohmann::ordered_json;

// Parses text, reporting syntax errors with line and column.
Json parse(std::string_view text, std::string_view source = "input");
Json read_file(const std::string& path);

// {"rows": r, "cols": c, "entries": [[...], ...]}. A bare array of rows is
// accepted on input.
Json to_json(const IntegerMatrix& m);
IntegerMatrix matrix_from_json(const Json& j, const std::string& path = "matrix");

Json to_json(const Bimatrix& a);
Bimatrix bimatrix_from_json(const Json& j, const std::string& path = "bimatrix");

Json to_json(const NFoldInstance& inst);
// Validates the result.
NFoldInstance instance_from_json(const Json& j);

Json to_json(const SolveReport& r);
SolveReport report_from_json(const Json& j);

Json to_json(const Certificate& c);
Json to_json(const GraverBasis& g);

Json to_json(const TransportationInstance& t);
TransportationInstance transportation_from_json(const Json& j);

Json to_json(const TableInstance& t);
TableInstance table_from_json(const Json& j);

Json to_json(const PiecewiseFunction& f);
PiecewiseFunction piecewise_from_json(const Json& j, const std::string& path);

IntVector int_vector(const Json& j, const std::string& path);
Int integer(const Json& j, const std::string& path);

// Two-space indented, trailing newline.
std::string dump(const Json& j);

}  // namespace nfold::io
