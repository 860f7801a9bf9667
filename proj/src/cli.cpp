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

#include "nfold/cli.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "nfold/models.hpp"
#include "nfold/oracle.hpp"
#include "nfold/solver.hpp"

namespace nfold::cli {

namespace {

struct OracleMismatch : Error {
    using Error::Error;
};

struct Settings {
    std::string input;
    std::string output;
    std::size_t threads = 0;
    bool oracle = false;
    bool quiet = false;
    std::optional<Int> degree;
    std::optional<Int> graver_complexity;
    std::optional<std::size_t> iteration_cap;
    bool certify_exact = false;
    std::string auxiliary = "folded";
    GraverBudget graver;
    StateSpaceBudget states;
    oracle::EnumerationBudget enumeration;
};

void add_budget_flags(CLI::App* app, Settings& s) {
    app->add_option("--threads", s.threads, "Threads for the step-size fan-out (0 = all cores)");
    app->add_option("--max-elements", s.graver.max_elements, "Graver completion working-set limit");
    app->add_option("--max-norm", s.graver.max_norm, "Largest infinity norm during Graver completion");
    app->add_option("--max-pending", s.graver.max_pending, "Pair reductions allowed during Graver completion");
    app->add_option("--max-states", s.states.max_states, "State-space size limit");
    app->add_option("--iteration-cap", s.iteration_cap, "Augmentation safety cap (default 10 n L + 100)");
}

void add_instance_flags(CLI::App* app, Settings& s) {
    app->add_option("--degree", s.degree, "Approximate mode: build the state space to this degree")
        ->check(CLI::PositiveNumber);
    app->add_option("--graver-complexity", s.graver_complexity, "Known Graver complexity of the bimatrix")
        ->check(CLI::PositiveNumber);
    add_budget_flags(app, s);
}

void add_common(CLI::App* app, Settings& s, bool input = true) {
    if (input) app->add_option("input", s.input, "Input JSON file")->required();
    app->add_option("-o,--output", s.output, "Write the report here instead of standard output");
    app->add_flag("--quiet", s.quiet, "No summary on standard error");
}

void add_oracle(CLI::App* app, Settings& s) {
    app->add_flag("--oracle", s.oracle, "Cross-check against the brute-force oracle");
    app->add_option("--oracle-points", s.enumeration.max_points, "Oracle enumeration budget");
}

SolveOptions solve_options(const Settings& s) {
    SolveOptions o;
    o.threads = s.threads;
    o.iteration_cap = s.iteration_cap;
    o.graver_budget = s.graver;
    o.state_budget = s.states;
    o.certify_exact = s.certify_exact;
    o.auxiliary = s.auxiliary == "paired" ? AuxiliaryForm::Paired : AuxiliaryForm::Folded;
    return o;
}

NFoldInstance load_instance(const Settings& s) {
    NFoldInstance inst = io::instance_from_json(io::read_file(s.input));
    if (s.degree) inst.degree = s.degree;
    if (s.graver_complexity) inst.graver_complexity_override = s.graver_complexity;
    return inst;
}

// An instance file, a bare bimatrix {"a1", "a2"}, or {"bimatrix": ...}.
NFoldInstance load_bimatrix_instance(const Settings& s) {
    io::Json j = io::read_file(s.input);
    NFoldInstance inst;
    if (j.is_object() && j.contains("n")) {
        inst = io::instance_from_json(j);
    } else {
        inst.bimatrix = j.is_object() && j.contains("bimatrix") ? io::bimatrix_from_json(j["bimatrix"])
                                                                : io::bimatrix_from_json(j);
        if (j.is_object() && j.contains("options")) {
            const io::Json& o = j["options"];
            if (o.contains("graver_complexity"))
                inst.graver_complexity_override = io::integer(o["graver_complexity"], "options.graver_complexity");
            if (o.contains("degree")) inst.degree = io::integer(o["degree"], "options.degree");
        }
    }
    if (s.degree) inst.degree = s.degree;
    if (s.graver_complexity) inst.graver_complexity_override = s.graver_complexity;
    return inst;
}

void emit(const Settings& s, const io::Json& j, std::ostream& out) {
    const std::string text = io::dump(j);
    if (s.output.empty()) {
        out << text;
        return;
    }
    std::ofstream f(s.output, std::ios::binary);
    if (!f) throw InputError("cannot write " + s.output);
    f << text;
}

std::string brief(const SolveReport& r) {
    std::ostringstream os;
    os << to_string(r.status);
    if (r.point) os << ", objective " << r.objective_value << ", " << r.iterations << " iterations";
    if (!r.exact) os << " (approximate)";
    return os.str();
}

void check_against_oracle(const NFoldInstance& inst, const SolveReport& r, const Settings& s) {
    oracle::OracleSolution o = oracle::brute_force_solve(inst, s.enumeration);
    if ((r.status == SolveStatus::Infeasible) != !o.feasible)
        throw OracleMismatch(std::string("oracle mismatch: solver says ") + to_string(r.status) + ", oracle says " +
                             (o.feasible ? "feasible" : "infeasible"));
    if (!o.feasible) return;
    if (r.status == SolveStatus::Optimal && r.objective_value != o.value)
        throw OracleMismatch("oracle mismatch: solver optimum " + std::to_string(r.objective_value) +
                             ", oracle optimum " + std::to_string(o.value));
    if (r.objective_value < o.value)
        throw OracleMismatch("oracle mismatch: solver value " + std::to_string(r.objective_value) +
                             " is below the oracle optimum " + std::to_string(o.value));
}

IntVector load_point(const std::string& path) {
    io::Json j = io::read_file(path);
    if (j.is_object() && j.contains("point")) return io::int_vector(j["point"], "point");
    return io::int_vector(j, "point");
}

// ---------------------------------------------------------------------------

int cmd_solve(const Settings& s, std::ostream& out, std::ostream& err) {
    NFoldInstance inst = load_instance(s);
    Solver solver(solve_options(s));
    SolveReport report = solver.solve(inst);
    if (!s.quiet) err << "solve: " << brief(report) << "\n";
    if (s.oracle) {
        check_against_oracle(inst, report, s);
        if (!s.quiet) err << "oracle: agrees\n";
    }
    emit(s, io::to_json(report), out);
    return kOk;
}

int cmd_certify(const Settings& s, const std::string& point_path, std::ostream& out, std::ostream& err) {
    NFoldInstance inst = load_instance(s);
    IntVector x = load_point(point_path);
    Solver solver(solve_options(s));
    Certificate c = solver.certify_optimal(inst, x);
    if (!s.quiet) err << "certify: " << (c.optimal() ? "optimal" : "improvable by " + std::to_string(-c.delta)) << "\n";
    if (s.oracle) {
        oracle::OracleSolution o = oracle::brute_force_solve(inst, s.enumeration);
        const bool at_optimum = evaluate_objective(inst.objective, x) == o.value;
        if (c.optimal() != at_optimum)
            throw OracleMismatch(std::string("oracle mismatch: certificate says ") +
                                 (c.optimal() ? "optimal" : "improvable") + ", oracle optimum is " +
                                 std::to_string(o.value));
    }
    emit(s, io::to_json(c), out);
    return kOk;
}

int cmd_feasible(const Settings& s, std::ostream& out, std::ostream& err) {
    NFoldInstance inst = load_instance(s);
    Solver solver(solve_options(s));
    FeasibilityResult f = solver.find_feasible(inst);
    if (!s.quiet) err << "feasible: " << (f.point ? "yes" : "no") << "\n";
    if (s.oracle) {
        oracle::OracleSolution o = oracle::brute_force_solve(inst, s.enumeration);
        if (o.feasible != f.point.has_value())
            throw OracleMismatch(std::string("oracle mismatch: oracle says ") + (o.feasible ? "feasible" : "infeasible"));
    }
    io::Json j;
    j["status"] = f.point ? "Feasible" : "Infeasible";
    j["point"] = f.point ? io::Json(*f.point) : io::Json(nullptr);
    emit(s, j, out);
    return kOk;
}

int cmd_graver(const Settings& s, std::ostream& out, std::ostream& err) {
    io::Json j = io::read_file(s.input);
    IntegerMatrix m = io::matrix_from_json(j.is_object() && j.contains("matrix") ? j["matrix"] : j, "matrix");
    GraverBasis g = graver_basis(m, s.graver);
    if (!s.quiet) err << "graver: " << g.size() << " elements\n";
    if (s.oracle) {
        Int norm = 1;
        for (const auto& e : g.elements) norm = std::max(norm, norm_inf(e));
        oracle::EnumerationBudget b = s.enumeration;
        b.max_norm = norm + 1;
        if (oracle::brute_force_graver(m, b) != g.elements)
            throw OracleMismatch("oracle mismatch: brute-force Graver basis differs");
    }
    emit(s, io::to_json(g), out);
    return kOk;
}

int cmd_complexity(const Settings& s, std::ostream& out, std::ostream& err) {
    NFoldInstance inst = load_bimatrix_instance(s);
    Solver solver(solve_options(s));
    const Int g = solver.graver_complexity_for(inst);
    if (!s.quiet) err << "complexity: g = " << g << "\n";
    if (s.oracle) {
        const Int lower = oracle::brute_force_graver_complexity(inst.bimatrix, 3, s.enumeration);
        if (lower > g)
            throw OracleMismatch("oracle mismatch: brute force finds " + std::to_string(lower) +
                                 " nonzero bricks, more than " + std::to_string(g));
    }
    emit(s, io::Json{{"graver_complexity", g}}, out);
    return kOk;
}

int cmd_statespace(const Settings& s, bool list, std::ostream& out, std::ostream& err) {
    NFoldInstance inst = load_bimatrix_instance(s);
    Solver solver(solve_options(s));
    auto z = solver.state_space_for(inst);
    if (!s.quiet) err << "statespace: " << z->size() << " states" << (z->exact() ? "" : " (approximate)") << "\n";
    io::Json j;
    j["dim"] = z->dim();
    j["count"] = z->size();
    j["degree"] = z->degree();
    j["exact"] = z->exact();
    j["saturated"] = z->saturated();
    if (list) {
        io::Json states = io::Json::array();
        for (std::size_t i = 0; i < z->size(); ++i) states.push_back(IntVector(z->state(i).begin(), z->state(i).end()));
        j["states"] = states;
    }
    emit(s, j, out);
    return kOk;
}

int cmd_transport(const Settings& s, std::ostream& out, std::ostream& err) {
    TransportationInstance t = io::transportation_from_json(io::read_file(s.input));
    TransportationModel model = transportation_to_nfold(t);
    if (s.degree) model.instance.degree = s.degree;
    if (s.graver_complexity) model.instance.graver_complexity_override = s.graver_complexity;
    Solver solver(solve_options(s));
    SolveReport report = solver.solve(model.instance);
    io::Json j;
    j["report"] = io::to_json(report);
    if (report.point) {
        Routing flow = model.decode(*report.point);
        io::Json routes = io::Json::array();
        for (std::size_t i = 0; i < t.m; ++i)
            for (std::size_t k = 0; k < t.n; ++k)
                routes.push_back(io::Json{{"supplier", i}, {"consumer", k}, {"flow", flow[i][k]}});
        j["routing"] = routes;
        j["cost"] = routing_cost(t, flow);
    } else {
        j["routing"] = nullptr;
        j["cost"] = nullptr;
    }
    if (!s.quiet) err << "transport: " << brief(report) << "\n";
    if (s.oracle) {
        auto o = oracle::brute_force_transportation(t, s.enumeration);
        if (o.feasible != report.point.has_value() ||
            (o.feasible && report.status == SolveStatus::Optimal && o.cost != report.objective_value))
            throw OracleMismatch("oracle mismatch: routing enumeration gives " +
                                 (o.feasible ? std::to_string(o.cost) : std::string("infeasible")));
    }
    emit(s, j, out);
    return kOk;
}

std::vector<Cell> parse_cells(const std::vector<std::string>& specs, const TableInstance& t) {
    std::vector<Cell> cells;
    if (specs.empty()) {
        for (std::size_t i = 0; i < t.n; ++i)
            for (std::size_t j = 0; j < t.p; ++j)
                for (std::size_t k = 0; k < t.q; ++k) cells.push_back({i, j, k});
        return cells;
    }
    for (const auto& spec : specs) {
        std::istringstream is(spec);
        Cell c;
        char a = 0, b = 0;
        if (!(is >> c.i >> a >> c.j >> b >> c.k) || a != ',' || b != ',' || !is.eof())
            throw InputError("--cell expects i,j,k, got \"" + spec + "\"");
        if (c.i >= t.n || c.j >= t.p || c.k >= t.q) throw InputError("--cell " + spec + " is outside the table");
        cells.push_back(c);
    }
    return cells;
}

int cmd_privacy(const Settings& s, const std::vector<std::string>& cell_specs, bool range, std::ostream& out,
                std::ostream& err) {
    TableInstance t = io::table_from_json(io::read_file(s.input));
    std::vector<Cell> cells = parse_cells(cell_specs, t);
    Solver solver(solve_options(s));
    std::vector<Table> tables;
    if (s.oracle) tables = oracle::enumerate_tables(t, s.enumeration);
    io::Json list = io::Json::array();
    bool feasible = true;
    for (const Cell& c : cells) {
        EntryBounds eb = entry_bounds(solver, t, c);
        if (!eb.feasible) {
            feasible = false;
            break;
        }
        io::Json item{{"cell", {c.i, c.j, c.k}}, {"min", eb.min}, {"max", eb.max}};
        std::vector<Int> values;
        if (range) {
            values = entry_value_range(solver, t, c);
            item["values"] = values;
        }
        if (s.oracle) {
            std::vector<Int> seen;
            for (const auto& tab : tables) seen.push_back(tab[c.i][c.j][c.k]);
            std::sort(seen.begin(), seen.end());
            seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
            if (seen.empty() || seen.front() != eb.min || seen.back() != eb.max || (range && seen != values))
                throw OracleMismatch("oracle mismatch at cell (" + std::to_string(c.i) + "," + std::to_string(c.j) +
                                     "," + std::to_string(c.k) + ")");
        }
        list.push_back(item);
    }
    if (s.oracle && tables.empty() == feasible) throw OracleMismatch("oracle mismatch: table feasibility differs");
    if (!s.quiet) err << "privacy-bounds: " << (feasible ? std::to_string(list.size()) + " cells" : "no table has these margins") << "\n";
    io::Json j;
    j["status"] = feasible ? "Feasible" : "Infeasible";
    j["cells"] = feasible ? list : io::Json::array();
    emit(s, j, out);
    return kOk;
}

int cmd_bench(const Settings& s, const BenchOptions& b, std::ostream& out, std::ostream& err) {
    BenchReport r = run_bench(b);
    if (!s.quiet) {
        err << "bench " << r.options.fixture << " seed " << r.options.seed << ", |Z| = " << r.states << "\n";
        err << std::setw(8) << "n" << std::setw(12) << "iterations" << std::setw(14) << "total ms" << std::setw(16)
            << "ms/iteration" << "\n";
        for (const auto& row : r.rows)
            err << std::setw(8) << row.n << std::setw(12) << row.iterations << std::setw(14) << std::fixed
                << std::setprecision(2) << row.total_ms << std::setw(16) << std::setprecision(4)
                << row.per_iteration_ms << "\n";
    }
    emit(s, to_json(r), out);
    return kOk;
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<std::string> bench_fixtures() { return {"tiny", "pair", "a1"}; }

Bimatrix bench_fixture(const std::string& name) {
    if (name == "tiny") return {IntegerMatrix::from_rows({{1, 1, 1}}), IntegerMatrix::from_rows({{1, 2, 3}})};
    if (name == "pair") return {IntegerMatrix::from_rows({{1, 1}}), IntegerMatrix::from_rows({{1, -1}})};
    if (name == "a1") return universal_bimatrix(1);
    throw InputError("unknown bench fixture \"" + name + "\"");
}

BenchReport run_bench(const BenchOptions& options) {
    BenchReport report;
    report.options = options;
    const Bimatrix a = bench_fixture(options.fixture);
    const std::size_t t = a.t();
    SolveOptions so;
    so.threads = options.threads;
    Solver solver(so);
    for (std::size_t n : options.ns) {
        if (n == 0) throw InputError("bench sizes must be positive");
        std::mt19937_64 rng(options.seed * 1000003 + n);
        std::uniform_int_distribution<Int> coord(0, options.width), weight(-5, 5);
        NFoldInstance inst;
        inst.bimatrix = a;
        inst.n = n;
        inst.l.assign(n * t, 0);
        inst.u.assign(n * t, options.width);
        IntVector start(n * t), w(n * t);
        for (auto& v : start) v = coord(rng);
        for (auto& v : w) v = weight(rng);
        inst.b = inst.constraint_lhs(start);
        inst.objective = LinearObjective{w};
        auto z = solver.state_space_for(inst);
        report.states = z->size();
        report.graver_complexity = solver.graver_complexity_for(inst);
        const auto t0 = std::chrono::steady_clock::now();
        SolveReport r = solver.augment_to_optimal(inst, start);
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        BenchRow row;
        row.n = n;
        row.iterations = r.iterations;
        row.total_ms = ms;
        row.per_iteration_ms = ms / static_cast<double>(r.iterations + 1);
        row.start_objective = evaluate_objective(inst.objective, start);
        row.final_objective = r.objective_value;
        report.rows.push_back(row);
    }
    return report;
}

io::Json to_json(const BenchReport& r) {
    io::Json rows = io::Json::array();
    for (const auto& row : r.rows)
        rows.push_back(io::Json{{"n", row.n},
                                {"iterations", row.iterations},
                                {"total_ms", row.total_ms},
                                {"per_iteration_ms", row.per_iteration_ms},
                                {"start_objective", row.start_objective},
                                {"final_objective", row.final_objective}});
    return io::Json{{"fixture", r.options.fixture},
                    {"seed", r.options.seed},
                    {"width", r.options.width},
                    {"graver_complexity", r.graver_complexity},
                    {"states", r.states},
                    {"rows", rows}};
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact n-fold integer programming by Graver-best augmentation"};
    app.name("nfold");
    app.require_subcommand(1, 1);
    Settings s;
    std::string point_path;
    bool list_states = false;
    bool range = false;
    std::vector<std::string> cells;
    BenchOptions bench;

    auto* solve = app.add_subcommand("solve", "Solve an instance: feasibility, then augmentation to optimality");
    add_common(solve, s);
    add_instance_flags(solve, s);
    add_oracle(solve, s);
    solve->add_flag("--certify-exact", s.certify_exact, "In approximate mode, re-certify against the exact space");
    solve->add_option("--auxiliary", s.auxiliary, "Feasibility program form")
        ->check(CLI::IsMember({"folded", "paired"}));

    auto* certify = app.add_subcommand("certify", "Check a feasible point for optimality");
    add_common(certify, s);
    add_instance_flags(certify, s);
    add_oracle(certify, s);
    certify->add_option("--point", point_path, "JSON array, or a report with a \"point\"")->required();

    auto* feasible = app.add_subcommand("feasible", "Find a feasible point or prove there is none");
    add_common(feasible, s);
    add_instance_flags(feasible, s);
    add_oracle(feasible, s);
    feasible->add_option("--auxiliary", s.auxiliary, "Feasibility program form")
        ->check(CLI::IsMember({"folded", "paired"}));

    auto* graver = app.add_subcommand("graver", "Graver basis of a matrix");
    add_common(graver, s);
    add_budget_flags(graver, s);
    add_oracle(graver, s);

    auto* complexity = app.add_subcommand("complexity", "Graver complexity of a bimatrix");
    add_common(complexity, s);
    add_instance_flags(complexity, s);
    add_oracle(complexity, s);

    auto* statespace = app.add_subcommand("statespace", "Size of the DP state space of a bimatrix");
    add_common(statespace, s);
    add_instance_flags(statespace, s);
    statespace->add_flag("--list", list_states, "Include every state in the report");

    auto* transport = app.add_subcommand("transport", "Solve a multicommodity transportation instance");
    add_common(transport, s);
    add_instance_flags(transport, s);
    add_oracle(transport, s);

    auto* privacy = app.add_subcommand("privacy-bounds", "Entry bounds of a 3-way table from its 2-margins");
    add_common(privacy, s);
    add_instance_flags(privacy, s);
    add_oracle(privacy, s);
    privacy->add_option("--cell", cells, "Cell i,j,k (repeatable; default all cells)");
    privacy->add_flag("--range", range, "Also list every attainable value");

    auto* bench_cmd = app.add_subcommand("bench", "Scaling benchmark of the augmentation loop");
    add_common(bench_cmd, s, false);
    bench_cmd->add_option("--fixture", bench.fixture, "Bimatrix fixture")->check(CLI::IsMember(bench_fixtures()));
    bench_cmd->add_option("--n", bench.ns, "Brick counts")->delimiter(',');
    bench_cmd->add_option("--seed", bench.seed, "Random seed");
    bench_cmd->add_option("--width", bench.width, "Variable range [0, width]")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--threads", bench.threads, "Threads for the step-size fan-out (0 = all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (*solve) return cmd_solve(s, out, err);
        if (*certify) return cmd_certify(s, point_path, out, err);
        if (*feasible) return cmd_feasible(s, out, err);
        if (*graver) return cmd_graver(s, out, err);
        if (*complexity) return cmd_complexity(s, out, err);
        if (*statespace) return cmd_statespace(s, list_states, out, err);
        if (*transport) return cmd_transport(s, out, err);
        if (*privacy) return cmd_privacy(s, cells, range, out, err);
        if (*bench_cmd) return cmd_bench(s, bench, out, err);
    } catch (const OracleMismatch& e) {
        err << "error: " << e.what() << "\n";
        return kOracleMismatch;
    } catch (const ResourceLimitError& e) {
        err << "error: " << e.what() << " [limit: " << e.limit();
        if (!e.hint().empty()) err << "; see " << e.hint();
        err << "]\n";
        return kResourceLimit;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const OverflowError& e) {
        err << "error: " << e.what() << "\n";
        return kResourceLimit;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInternalError;
    }
    return kInternalError;
}

}  // namespace nfold::cli
