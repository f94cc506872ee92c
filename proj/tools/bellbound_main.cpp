// Command-line front end: lhv | qvalue | bounds | source-op | verify.
// Every JSON report carries the tool version, the echoed configuration and
// the tolerance table; identical configuration and seed produce byte-identical
// JSON (wall-clock timings appear only in text output).

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bellbound/acceptance.hpp"
#include "bellbound/bounds.hpp"
#include "bellbound/errors.hpp"
#include "bellbound/json_io.hpp"
#include "bellbound/quantum.hpp"
#include "bellbound/rng.hpp"
#include "bellbound/scenario.hpp"
#include "bellbound/source_operator.hpp"
#include "bellbound/tolerances.hpp"
#include "bellbound/version.hpp"

namespace {

using bellbound::ordered_json;

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(15) << x;
    return os.str();
}

ordered_json tolerances_json() {
    ordered_json t;
    t["structural"] = bellbound::kTol.structural;
    t["spectral"]   = bellbound::kTol.spectral;
    t["algebraic"]  = bellbound::kTol.algebraic;
    t["signaling"]  = bellbound::kTol.signaling;
    t["seesaw_obj"] = bellbound::kTol.seesaw_obj;
    return t;
}

ordered_json report_envelope(const std::string& command, ordered_json config,
                             ordered_json result) {
    ordered_json j;
    j["tool"]       = "bellbound";
    j["version"]    = bellbound::kVersion;
    j["command"]    = command;
    j["config"]     = std::move(config);
    j["tolerances"] = tolerances_json();
    j["result"]     = std::move(result);
    return j;
}

void write_out(const std::string& out_path, const std::string& payload) {
    if (out_path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f)
        throw bellbound::Error::validation("cannot open output file: " +
                                           out_path);
    f << payload;
}

void emit(const std::string& out_path, const std::string& format,
          const ordered_json& report, const std::string& text) {
    if (format == "json")
        write_out(out_path, report.dump(2) + "\n");
    else
        write_out(out_path, text);
}

bellbound::BellFunctional read_functional(const std::string& path,
                                          const std::string& builtin) {
    if (!path.empty() && !builtin.empty())
        throw bellbound::Error::validation(
            "give either --functional or --builtin, not both");
    if (!path.empty())
        return bellbound::functional_from_json(
            bellbound::load_json_file(path));
    if (!builtin.empty()) return bellbound::builtin_functional(builtin);
    throw bellbound::Error::validation(
        "a functional is required: --functional <file> or --builtin <name>");
}

// ---------------------------------------------------------------- lhv ----

struct LhvArgs {
    std::string functional;
    std::string builtin;
    std::size_t budget = bellbound::kLhvStrategyBudget;
    double upsilon     = 1.0;
    bool has_upsilon   = false;
    std::string out;
    std::string format = "json";
};

int run_lhv(const LhvArgs& a) {
    auto f = read_functional(a.functional, a.builtin);
    auto c = bellbound::lhv_constants(f, a.budget);

    ordered_json config;
    config["functional"] = a.functional.empty() ? ordered_json(nullptr)
                                                : ordered_json(a.functional);
    config["builtin"]    = a.builtin.empty() ? ordered_json(nullptr)
                                             : ordered_json(a.builtin);
    config["budget"]     = a.budget;
    if (a.has_upsilon) config["upsilon"] = a.upsilon;

    ordered_json result;
    result["sup"]        = c.sup;
    result["inf"]        = c.inf;
    result["lhv_norm"]   = c.lhv_norm;
    result["strategies"] = c.strategies;
    result["arg_sup"]    = c.arg_sup;
    result["arg_inf"]    = c.arg_inf;
    std::ostringstream text;
    text << "sup " << fmt(c.sup) << "\n"
         << "inf " << fmt(c.inf) << "\n"
         << "lhv_norm " << fmt(c.lhv_norm) << "\n"
         << "strategies " << c.strategies << "\n";
    if (a.has_upsilon) {
        auto env = bellbound::envelope_from_constants(c, a.upsilon);
        result["envelope"] = {{"lower", env.lower}, {"upper", env.upper}};
        text << "envelope [" << fmt(env.lower) << ", " << fmt(env.upper)
             << "] at upsilon " << fmt(a.upsilon) << "\n";
    }

    emit(a.out, a.format, report_envelope("lhv", config, result), text.str());
    return 0;
}

// ------------------------------------------------------------- qvalue ----

struct QvalueArgs {
    std::string functional;
    std::string builtin;
    std::string model;
    std::vector<int> dims;
    int restarts        = bellbound::SeesawOptions{}.restarts;
    int max_iters       = bellbound::SeesawOptions{}.max_iters;
    double obj_tol      = bellbound::SeesawOptions{}.obj_tol;
    std::uint64_t seed  = bellbound::kDefaultSeed;
    bool emit_model     = false;
    std::string out;
    std::string format = "json";
};

int run_qvalue(const QvalueArgs& a) {
    auto f = read_functional(a.functional, a.builtin);

    ordered_json config;
    config["functional"] = a.functional.empty() ? ordered_json(nullptr)
                                                : ordered_json(a.functional);
    config["builtin"]    = a.builtin.empty() ? ordered_json(nullptr)
                                             : ordered_json(a.builtin);

    if (!a.model.empty()) {
        // Evaluation mode: score one concrete model against the functional.
        auto m = bellbound::model_from_json(bellbound::load_json_file(a.model));
        m.validate(f.scenario());
        double bv =
            bell_value(f, bellbound::quantum_behavior(f.scenario(), m));
        double ratio = bellbound::violation_ratio(f, m);
        auto c       = bellbound::lhv_constants(f);

        config["model"] = a.model;
        ordered_json result;
        result["bell_value"] = bv;
        result["lhv_norm"]   = c.lhv_norm;
        result["ratio"]      = ratio;
        std::ostringstream text;
        text << "bell_value " << fmt(bv) << "\n"
             << "lhv_norm " << fmt(c.lhv_norm) << "\n"
             << "ratio " << fmt(ratio) << "\n";
        emit(a.out, a.format, report_envelope("qvalue", config, result),
             text.str());
        return 0;
    }

    if (a.dims.empty())
        throw bellbound::Error::validation(
            "see-saw mode needs --dims (or pass --model to evaluate a model)");
    bellbound::SeesawOptions opt;
    opt.restarts  = a.restarts;
    opt.max_iters = a.max_iters;
    opt.obj_tol   = a.obj_tol;
    opt.seed      = a.seed;
    auto rep = bellbound::seesaw(f, bellbound::DimVector{a.dims}, opt);

    config["dims"]      = a.dims;
    config["restarts"]  = a.restarts;
    config["max_iters"] = a.max_iters;
    config["obj_tol"]   = a.obj_tol;
    config["seed"]      = a.seed;

    ordered_json result;
    result["quantum_value"] = rep.quantum_value;
    result["lhv_norm"]      = rep.lhv_norm;
    result["ratio"]         = rep.ratio;
    result["iterations"]    = rep.iterations;
    result["restarts"]      = rep.restarts;
    result["converged"]     = rep.converged;
    result["trajectory"]    = rep.trajectory;
    result["lhv"] = {{"sup", rep.lhv.sup}, {"inf", rep.lhv.inf}};
    if (a.emit_model) result["model"] = bellbound::model_to_json(rep.model);

    std::ostringstream text;
    text << "quantum_value " << fmt(rep.quantum_value) << "\n"
         << "lhv_norm " << fmt(rep.lhv_norm) << "\n"
         << "ratio " << fmt(rep.ratio) << "\n"
         << "iterations " << rep.iterations << "\n"
         << "converged " << (rep.converged ? "yes" : "no") << "\n";
    emit(a.out, a.format, report_envelope("qvalue", config, result),
         text.str());
    return 0;
}

// ------------------------------------------------------------- bounds ----

struct BoundsArgs {
    int d = 2;
    int N = 2;
    int S = 0;
    bool has_S = false;
    std::string measurements = "generalized";
    std::string state        = "arbitrary";
    std::string grid_csv;
    std::string out;
    std::string format = "json";
};

bellbound::BoundQuery make_query(const BoundsArgs& a, int d, int N) {
    bellbound::BoundQuery q;
    q.d = d;
    q.N = N;
    if (a.has_S) q.settings = a.S;
    q.measurement_class = a.measurements == "projective"
                              ? bellbound::MeasurementClass::projective
                              : bellbound::MeasurementClass::generalized;
    q.state_class = a.state == "ghz" ? bellbound::StateClass::ghz
                                     : bellbound::StateClass::arbitrary;
    return q;
}

ordered_json entry_json(const bellbound::BoundEntry& e) {
    ordered_json j;
    j["label"] = e.label;
    j["value"] = e.value ? ordered_json(*e.value) : ordered_json(nullptr);
    j["exact"] = e.exact ? ordered_json(*e.exact) : ordered_json(nullptr);
    j["applicability"] = e.applicability;
    j["citation"]      = e.citation;
    return j;
}

int run_bounds(const BoundsArgs& a) {
    auto q = make_query(a, a.d, a.N);
    q.validate();
    auto rep = bellbound::best_known(q);

    ordered_json config;
    config["d"] = a.d;
    config["N"] = a.N;
    config["S"] = a.has_S ? ordered_json(a.S) : ordered_json(nullptr);
    config["measurements"] = a.measurements;
    config["state"]        = a.state;
    if (!a.grid_csv.empty()) config["grid_csv"] = a.grid_csv;

    ordered_json result;
    result["entries"] = ordered_json::array();
    for (const auto& e : rep.entries) result["entries"].push_back(entry_json(e));
    result["best"]       = rep.best;
    result["best_label"] = rep.best_label;

    std::ostringstream text;
    for (const auto& e : rep.entries) {
        text << e.label << " ";
        if (e.exact)
            text << *e.exact;
        else if (e.value)
            text << fmt(*e.value);
        else
            text << "-";
        text << "  [" << e.applicability << "]\n";
    }
    text << "best " << fmt(rep.best) << " (" << rep.best_label << ")\n";

    if (!a.grid_csv.empty()) {
        // Long-format comparison table over the (d, N) grid up to the query.
        std::ostringstream csv;
        csv << "d,N,label,value,is_best\n";
        for (int d = 2; d <= a.d; ++d)
            for (int N = 2; N <= a.N; ++N) {
                auto qq = make_query(a, d, N);
                auto rr = bellbound::best_known(qq);
                for (const auto& e : rr.entries) {
                    if (!e.value) continue;
                    csv << d << "," << N << "," << e.label << ",";
                    if (e.exact)
                        csv << *e.exact;
                    else
                        csv << std::setprecision(17) << *e.value;
                    csv << "," << (e.label == rr.best_label ? 1 : 0) << "\n";
                }
            }
        std::ofstream f(a.grid_csv, std::ios::binary);
        if (!f)
            throw bellbound::Error::validation("cannot open output file: " +
                                               a.grid_csv);
        f << csv.str();
    }

    emit(a.out, a.format, report_envelope("bounds", config, result),
         text.str());
    return 0;
}

// ---------------------------------------------------------- source-op ----

struct SourceOpArgs {
    std::string state;
    std::vector<int> dims;
    std::vector<int> ghz;
    std::vector<int> uniform;
    std::vector<int> settings;
    int pivot          = 0;
    int trials         = 20;
    std::uint64_t seed = bellbound::kDefaultSeed;
    std::string out;
    std::string format = "json";
};

int run_source_op(const SourceOpArgs& a) {
    int given = (!a.state.empty()) + (!a.ghz.empty()) + (!a.uniform.empty());
    if (given != 1)
        throw bellbound::Error::validation(
            "give exactly one state source: --state, --ghz or --uniform");

    std::vector<bellbound::cd> psi;
    bellbound::DimVector dims;
    if (!a.ghz.empty()) {
        psi  = bellbound::ghz_state(a.ghz[0], a.ghz[1]);
        dims = bellbound::DimVector{std::vector<int>(
            static_cast<std::size_t>(a.ghz[1]), a.ghz[0])};
    } else if (!a.uniform.empty()) {
        psi  = bellbound::uniform_superposition(a.uniform[0], a.uniform[1]);
        dims = bellbound::DimVector{std::vector<int>(
            static_cast<std::size_t>(a.uniform[1]), a.uniform[0])};
    } else {
        if (a.dims.empty())
            throw bellbound::Error::validation("--state needs --dims");
        auto m = bellbound::matrix_from_json(
            bellbound::load_json_file(a.state), "state");
        if (m.cols() != 1 && m.rows() != 1)
            throw bellbound::Error::validation(
                "state: expected a column (or row) vector matrix");
        psi.assign(m.data().begin(), m.data().end());
        dims = bellbound::DimVector{a.dims};
        if (dims.product() != psi.size())
            throw bellbound::Error::validation(
                "state: --dims product does not match the vector length");
    }

    auto dec = bellbound::decompose_pure_state(psi, dims, a.pivot);
    auto t   = bellbound::build_source_operator(dec, a.settings);
    auto dil = bellbound::verify_dilation(t, psi, a.trials, a.seed);
    auto cov = bellbound::covering_estimate(dec);
    double trace = t.op.trace().real();

    ordered_json config;
    if (!a.state.empty()) config["state"] = a.state;
    if (!a.ghz.empty()) config["ghz"] = a.ghz;
    if (!a.uniform.empty()) config["uniform"] = a.uniform;
    config["dims"]     = dims.dims;
    config["settings"] = a.settings;
    config["pivot"]    = a.pivot;
    config["trials"]   = a.trials;
    config["seed"]     = a.seed;

    ordered_json result;
    result["estimate"]            = cov.estimate;
    result["theorem_bound"]       = cov.theorem_bound;
    result["trace"]               = trace;
    result["partial_trace_error"] = dil.partial_trace_error;
    result["dilation_error"]      = dil.dilation_error;

    std::ostringstream text;
    text << "estimate " << fmt(cov.estimate) << "\n"
         << "theorem_bound " << fmt(cov.theorem_bound) << "\n"
         << "trace " << fmt(trace) << "\n"
         << "partial_trace_error " << fmt(dil.partial_trace_error) << "\n"
         << "dilation_error " << fmt(dil.dilation_error) << "\n";
    emit(a.out, a.format, report_envelope("source-op", config, result),
         text.str());
    return 0;
}

// ------------------------------------------------------------- verify ----

struct VerifyArgs {
    std::string suite  = "all";
    std::string out;
    std::string format = "text";
};

int run_verify(const VerifyArgs& a) {
    auto checks = bellbound::run_acceptance(a.suite);
    bool all    = true;

    std::ostringstream text;
    for (const auto& c : checks) {
        all = all && c.passed;
        text << (c.passed ? "[PASS] " : "[FAIL] ") << c.suite << "/" << c.name
             << "  (" << std::fixed << std::setprecision(2) << c.seconds
             << "s, limit " << std::setprecision(0) << c.limit << "s)";
        text.unsetf(std::ios::fixed);
        text << std::setprecision(6);
        if (!c.detail.empty()) text << "  " << c.detail;
        text << "\n";
    }
    std::size_t passed = 0;
    for (const auto& c : checks) passed += c.passed ? 1 : 0;
    text << passed << "/" << checks.size() << " checks passed\n";

    ordered_json config;
    config["suite"] = a.suite;
    ordered_json result;
    result["checks"] = ordered_json::array();
    for (const auto& c : checks) {
        ordered_json j;
        j["name"]          = c.name;
        j["suite"]         = c.suite;
        j["passed"]        = c.passed;
        j["limit_seconds"] = c.limit;
        j["detail"]        = c.detail;
        result["checks"].push_back(j);
    }
    result["all_passed"] = all;

    emit(a.out, a.format, report_envelope("verify", config, result),
         text.str());
    return all ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical toolkit for Bell-functional violation bounds"};
    app.require_subcommand(1);
    const auto format_check = CLI::IsMember({"json", "text"});

    LhvArgs lhv;
    auto* cmd_lhv = app.add_subcommand(
        "lhv", "Deterministic-strategy extremes of a Bell functional");
    cmd_lhv->add_option("--functional", lhv.functional,
                        "Functional JSON file");
    cmd_lhv->add_option("--builtin", lhv.builtin,
                        "Built-in functional: chsh or mermin_klyshko(N)");
    cmd_lhv->add_option("--budget", lhv.budget,
                        "Strategy enumeration budget");
    auto* ups = cmd_lhv->add_option(
        "--upsilon", lhv.upsilon,
        "Also report the value envelope at this violation ratio");
    cmd_lhv->add_option("--out", lhv.out, "Write the report to this file");
    cmd_lhv->add_option("--format", lhv.format, "json or text")
        ->check(format_check);

    QvalueArgs qv;
    auto* cmd_qv = app.add_subcommand(
        "qvalue", "See-saw maximization of a Bell functional over quantum "
                  "models, or evaluation of a given model");
    cmd_qv->add_option("--functional", qv.functional, "Functional JSON file");
    cmd_qv->add_option("--builtin", qv.builtin,
                       "Built-in functional: chsh or mermin_klyshko(N)");
    cmd_qv->add_option("--model", qv.model,
                       "Evaluate this model file instead of optimizing");
    cmd_qv->add_option("--dims", qv.dims, "Local dimension per party")
        ->delimiter(',');
    cmd_qv->add_option("--restarts", qv.restarts, "Random restarts");
    cmd_qv->add_option("--max-iters", qv.max_iters, "Sweep cap per restart");
    cmd_qv->add_option("--obj-tol", qv.obj_tol,
                       "Convergence tolerance on objective improvement");
    cmd_qv->add_option("--seed", qv.seed, "Random seed");
    cmd_qv->add_flag("--emit-model", qv.emit_model,
                     "Include the attaining model in the report");
    cmd_qv->add_option("--out", qv.out, "Write the report to this file");
    cmd_qv->add_option("--format", qv.format, "json or text")
        ->check(format_check);

    BoundsArgs bd;
    auto* cmd_bd = app.add_subcommand(
        "bounds", "Catalog of violation-ratio upper bounds for a scenario");
    cmd_bd->add_option("--d", bd.d, "Local dimension")->required();
    cmd_bd->add_option("--N", bd.N, "Number of parties")->required();
    auto* sopt =
        cmd_bd->add_option("--S", bd.S, "Settings per site (absent = any)");
    cmd_bd->add_option("--measurements", bd.measurements,
                       "generalized or projective")
        ->check(CLI::IsMember({"generalized", "projective"}));
    cmd_bd->add_option("--state", bd.state, "arbitrary or ghz")
        ->check(CLI::IsMember({"arbitrary", "ghz"}));
    cmd_bd->add_option("--grid-csv", bd.grid_csv,
                       "Also write a CSV comparison over the (d, N) grid "
                       "up to the query");
    cmd_bd->add_option("--out", bd.out, "Write the report to this file");
    cmd_bd->add_option("--format", bd.format, "json or text")
        ->check(format_check);

    SourceOpArgs so;
    auto* cmd_so = app.add_subcommand(
        "source-op", "Source-operator dilation of a pure state: build, "
                     "verify, and estimate");
    cmd_so->add_option("--state", so.state,
                       "State vector as a matrix JSON file (one column)");
    cmd_so->add_option("--dims", so.dims, "Site dimensions for --state")
        ->delimiter(',');
    cmd_so->add_option("--ghz", so.ghz, "GHZ state: d parties")
        ->expected(2);
    cmd_so->add_option("--uniform", so.uniform,
                       "Uniform superposition: d parties")
        ->expected(2);
    cmd_so->add_option("--settings", so.settings,
                       "Copy count per non-pivot site, ascending site order")
        ->delimiter(',')
        ->required();
    cmd_so->add_option("--pivot", so.pivot, "Site kept at one copy");
    cmd_so->add_option("--trials", so.trials, "Random observable tuples");
    cmd_so->add_option("--seed", so.seed, "Random seed");
    cmd_so->add_option("--out", so.out, "Write the report to this file");
    cmd_so->add_option("--format", so.format, "json or text")
        ->check(format_check);

    VerifyArgs vf;
    auto* cmd_vf =
        app.add_subcommand("verify", "Run the acceptance check suites");
    cmd_vf->add_option("--suite", vf.suite,
                       "attainability, structure, estimates, catalog or all")
        ->check(CLI::IsMember(
            {"attainability", "structure", "estimates", "catalog", "all"}));
    cmd_vf->add_option("--out", vf.out, "Write the report to this file");
    cmd_vf->add_option("--format", vf.format, "json or text")
        ->check(format_check);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        lhv.has_upsilon = ups->count() > 0;
        bd.has_S        = sopt->count() > 0;
        if (cmd_lhv->parsed()) return run_lhv(lhv);
        if (cmd_qv->parsed()) return run_qvalue(qv);
        if (cmd_bd->parsed()) return run_bounds(bd);
        if (cmd_so->parsed()) return run_source_op(so);
        if (cmd_vf->parsed()) return run_verify(vf);
    } catch (const bellbound::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == bellbound::ErrorKind::budget ? 3 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
