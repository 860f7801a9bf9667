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

#include "nfold/json_io.hpp"

#include <fstream>
#include <limits>
#include <sstream>

namespace nfold::io {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw InputError((path.empty() ? std::string("input") : path) + ": " + what);
}

const Json& field(const Json& j, const std::string& path, const char* name) {
    if (!j.is_object()) fail(path, "expected an object");
    auto it = j.find(name);
    if (it == j.end()) fail(path, std::string("missing field \"") + name + "\"");
    return *it;
}

const Json* optional_field(const Json& j, const char* name) {
    auto it = j.find(name);
    return it == j.end() || it->is_null() ? nullptr : &*it;
}

std::string join(const std::string& path, const char* name) { return path.empty() ? name : path + "." + name; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

std::size_t count(const Json& j, const std::string& path) {
    Int v = integer(j, path);
    if (v < 0) fail(path, "must be nonnegative");
    return static_cast<std::size_t>(v);
}

std::vector<IntVector> int_rows(const Json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of arrays");
    std::vector<IntVector> rows;
    for (std::size_t i = 0; i < j.size(); ++i) rows.push_back(int_vector(j[i], at(path, i)));
    return rows;
}

Json rows_json(const std::vector<IntVector>& rows) {
    Json out = Json::array();
    for (const auto& r : rows) out.push_back(r);
    return out;
}

}  // namespace

Json parse(std::string_view text, std::string_view source) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1, column = 1;
        for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
            if (text[k] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        std::string msg = e.what();
        if (auto p = msg.find("syntax error"); p != std::string::npos) msg = msg.substr(p);
        throw InputError(std::string(source) + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + msg);
    }
}

Json read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
}

Int integer(const Json& j, const std::string& path) {
    if (j.is_number_integer()) {
        if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<Int>::max()))
            fail(path, "integer out of range");
        return j.get<Int>();
    }
    if (j.is_number_float()) fail(path, "expected an exact integer, got " + j.dump());
    if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        if (s.find("inf") != std::string::npos || s.find("Inf") != std::string::npos)
            fail(path, "bounds and data must be finite");
    }
    fail(path, "expected an integer, got " + j.dump());
}

IntVector int_vector(const Json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of integers");
    IntVector out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(integer(j[i], at(path, i)));
    return out;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------

Json to_json(const IntegerMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(IntVector(m.row(i).begin(), m.row(i).end()));
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", rows}};
}

IntegerMatrix matrix_from_json(const Json& j, const std::string& path) {
    if (j.is_array()) {
        auto rows = int_rows(j, path);
        const std::size_t cols = rows.empty() ? 0 : rows[0].size();
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (rows[i].size() != cols) fail(at(path, i), "rows have different lengths");
        return IntegerMatrix::from_rows(rows, cols);
    }
    const std::size_t r = count(field(j, path, "rows"), join(path, "rows"));
    const std::size_t c = count(field(j, path, "cols"), join(path, "cols"));
    auto rows = int_rows(field(j, path, "entries"), join(path, "entries"));
    if (rows.size() != r) fail(join(path, "entries"), "expected " + std::to_string(r) + " rows");
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (rows[i].size() != c) fail(at(join(path, "entries"), i), "expected " + std::to_string(c) + " entries");
    return IntegerMatrix::from_rows(rows, c);
}

Json to_json(const Bimatrix& a) { return Json{{"a1", to_json(a.a1)}, {"a2", to_json(a.a2)}}; }

Bimatrix bimatrix_from_json(const Json& j, const std::string& path) {
    Bimatrix a{matrix_from_json(field(j, path, "a1"), join(path, "a1")),
               matrix_from_json(field(j, path, "a2"), join(path, "a2"))};
    if (a.a1.cols() != a.a2.cols())
        fail(path, "a1 has " + std::to_string(a.a1.cols()) + " columns but a2 has " + std::to_string(a.a2.cols()));
    return a;
}

Json to_json(const PiecewiseFunction& f) {
    return Json{{"breakpoints", f.breakpoints}, {"slopes", f.slopes}, {"intercepts", f.intercepts}};
}

PiecewiseFunction piecewise_from_json(const Json& j, const std::string& path) {
    PiecewiseFunction f;
    f.breakpoints = int_vector(field(j, path, "breakpoints"), join(path, "breakpoints"));
    f.slopes = int_vector(field(j, path, "slopes"), join(path, "slopes"));
    f.intercepts = int_vector(field(j, path, "intercepts"), join(path, "intercepts"));
    try {
        f.validate();
    } catch (const InputError& e) {
        fail(path, e.what());
    }
    return f;
}

Json to_json(const NFoldInstance& inst) {
    Json out;
    out["bimatrix"] = to_json(inst.bimatrix);
    out["n"] = inst.n;
    out["b"] = inst.b;
    out["l"] = inst.l;
    out["u"] = inst.u;
    if (const auto* lin = std::get_if<LinearObjective>(&inst.objective)) {
        out["objective"] = Json{{"linear", lin->w}};
    } else {
        const auto& pw = std::get<PiecewiseObjective>(inst.objective);
        Json terms = Json::array();
        for (const auto& term : pw.terms()) {
            Json t = Json{{"i", term.brick}, {"j", term.coord}};
            t.update(to_json(term.f));
            terms.push_back(t);
        }
        out["objective"] = Json{{"piecewise", terms}, {"max_pieces", pw.max_pieces()}};
    }
    Json options = Json::object();
    if (inst.graver_complexity_override) options["graver_complexity"] = *inst.graver_complexity_override;
    if (inst.degree) options["degree"] = *inst.degree;
    if (!options.empty()) out["options"] = options;
    return out;
}

NFoldInstance instance_from_json(const Json& j) {
    if (!j.is_object()) fail("instance", "expected an object");
    NFoldInstance inst;
    inst.bimatrix = bimatrix_from_json(field(j, "", "bimatrix"), "bimatrix");
    inst.n = count(field(j, "", "n"), "n");
    inst.b = int_vector(field(j, "", "b"), "b");
    inst.l = int_vector(field(j, "", "l"), "l");
    inst.u = int_vector(field(j, "", "u"), "u");
    const Json& obj = field(j, "", "objective");
    if (const Json* lin = obj.is_object() ? optional_field(obj, "linear") : nullptr) {
        inst.objective = LinearObjective{int_vector(*lin, "objective.linear")};
    } else if (const Json* pw = obj.is_object() ? optional_field(obj, "piecewise") : nullptr) {
        if (!pw->is_array()) fail("objective.piecewise", "expected an array of terms");
        std::vector<PiecewiseTerm> terms;
        for (std::size_t k = 0; k < pw->size(); ++k) {
            const std::string path = at("objective.piecewise", k);
            const Json& term = (*pw)[k];
            terms.push_back({count(field(term, path, "i"), path + ".i"), count(field(term, path, "j"), path + ".j"),
                             piecewise_from_json(term, path)});
        }
        std::size_t max_pieces = PiecewiseObjective::kDefaultMaxPieces;
        if (const Json* mp = optional_field(obj, "max_pieces")) max_pieces = count(*mp, "objective.max_pieces");
        inst.objective = PiecewiseObjective(inst.n, inst.bimatrix.t(), std::move(terms), max_pieces);
    } else {
        fail("objective", "expected {\"linear\": [...]} or {\"piecewise\": [...]}");
    }
    if (const Json* options = optional_field(j, "options")) {
        if (!options->is_object()) fail("options", "expected an object");
        if (const Json* g = optional_field(*options, "graver_complexity")) {
            inst.graver_complexity_override = integer(*g, "options.graver_complexity");
            if (*inst.graver_complexity_override < 1) fail("options.graver_complexity", "must be positive");
        }
        if (const Json* d = optional_field(*options, "degree")) {
            inst.degree = integer(*d, "options.degree");
            if (*inst.degree < 1) fail("options.degree", "must be positive");
        }
    }
    inst.validate();
    return inst;
}

// ---------------------------------------------------------------------------

Json to_json(const SolveReport& r) {
    Json trace = Json::array();
    for (const auto& e : r.trace)
        trace.push_back(Json{{"gamma", e.gamma}, {"step_norm", e.step_norm}, {"objective", e.objective}});
    Json out;
    out["status"] = to_string(r.status);
    out["point"] = r.point ? Json(*r.point) : Json(nullptr);
    out["objective_value"] = r.objective_value;
    out["iterations"] = r.iterations;
    out["trace"] = trace;
    out["exact"] = r.exact;
    return out;
}

SolveReport report_from_json(const Json& j) {
    SolveReport r;
    const Json& status = field(j, "", "status");
    if (!status.is_string()) fail("status", "expected a string");
    const auto& s = status.get_ref<const std::string&>();
    if (s == "Optimal") r.status = SolveStatus::Optimal;
    else if (s == "Infeasible") r.status = SolveStatus::Infeasible;
    else if (s == "HeuristicFeasible") r.status = SolveStatus::HeuristicFeasible;
    else fail("status", "unknown status \"" + s + "\"");
    if (const Json* p = optional_field(j, "point")) r.point = int_vector(*p, "point");
    r.objective_value = integer(field(j, "", "objective_value"), "objective_value");
    r.iterations = count(field(j, "", "iterations"), "iterations");
    const Json& trace = field(j, "", "trace");
    if (!trace.is_array()) fail("trace", "expected an array");
    for (std::size_t k = 0; k < trace.size(); ++k) {
        const std::string path = at("trace", k);
        r.trace.push_back({integer(field(trace[k], path, "gamma"), path + ".gamma"),
                           integer(field(trace[k], path, "step_norm"), path + ".step_norm"),
                           integer(field(trace[k], path, "objective"), path + ".objective")});
    }
    const Json& exact = field(j, "", "exact");
    if (!exact.is_boolean()) fail("exact", "expected true or false");
    r.exact = exact.get<bool>();
    return r;
}

Json to_json(const Certificate& c) {
    Json out;
    out["verdict"] = c.optimal() ? "Optimal" : "Improvable";
    if (!c.optimal()) {
        out["step"] = c.step;
        out["delta"] = c.delta;
    }
    return out;
}

Json to_json(const GraverBasis& g) {
    Json elements = Json::array();
    for (const auto& e : g.elements) elements.push_back(e);
    return Json{{"dim", g.dim}, {"count", g.size()}, {"elements", elements}};
}

// ---------------------------------------------------------------------------

Json to_json(const TransportationInstance& t) {
    Json cost = Json::array();
    for (const auto& row : t.cost) {
        Json r = Json::array();
        for (const auto& f : row) r.push_back(to_json(f));
        cost.push_back(r);
    }
    return Json{{"l", t.l},
                {"m", t.m},
                {"n", t.n},
                {"supply", rows_json(t.supply)},
                {"demand", rows_json(t.demand)},
                {"capacity", rows_json(t.capacity)},
                {"cost", cost}};
}

TransportationInstance transportation_from_json(const Json& j) {
    TransportationInstance t;
    t.l = count(field(j, "", "l"), "l");
    t.m = count(field(j, "", "m"), "m");
    t.n = count(field(j, "", "n"), "n");
    t.supply = int_rows(field(j, "", "supply"), "supply");
    t.demand = int_rows(field(j, "", "demand"), "demand");
    t.capacity = int_rows(field(j, "", "capacity"), "capacity");
    const Json& cost = field(j, "", "cost");
    if (!cost.is_array()) fail("cost", "expected an array of arrays");
    for (std::size_t i = 0; i < cost.size(); ++i) {
        if (!cost[i].is_array()) fail(at("cost", i), "expected an array");
        std::vector<PiecewiseFunction> row;
        for (std::size_t k = 0; k < cost[i].size(); ++k) {
            const std::string path = at(at("cost", i), k);
            const Json& c = cost[i][k];
            // A bare integer c is the linear cost c * flow.
            if (c.is_number()) row.push_back(PiecewiseFunction{{}, {integer(c, path)}, {0}});
            else row.push_back(piecewise_from_json(c, path));
        }
        t.cost.push_back(std::move(row));
    }
    t.validate();
    return t;
}

Json to_json(const TableInstance& t) {
    return Json{{"n", t.n},
                {"p", t.p},
                {"q", t.q},
                {"margins", Json{{"jk", rows_json(t.jk)}, {"ik", rows_json(t.ik)}, {"ij", rows_json(t.ij)}}}};
}

TableInstance table_from_json(const Json& j) {
    TableInstance t;
    t.n = count(field(j, "", "n"), "n");
    t.p = count(field(j, "", "p"), "p");
    t.q = count(field(j, "", "q"), "q");
    const Json& m = field(j, "", "margins");
    t.jk = int_rows(field(m, "margins", "jk"), "margins.jk");
    t.ik = int_rows(field(m, "margins", "ik"), "margins.ik");
    t.ij = int_rows(field(m, "margins", "ij"), "margins.ij");
    t.validate();
    return t;
}

}  // namespace nfold::io
