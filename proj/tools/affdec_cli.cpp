#include "plot.hpp"

#include "affdec/counterexample.hpp"
#include "affdec/decompose.hpp"
#include "affdec/errors.hpp"
#include "affdec/serialize.hpp"
#include "affdec/surfaces.hpp"
#include "affdec/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

using namespace affdec;

namespace {

struct Globals {
    bool timings = false;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write '" + path + "'");
    out << text;
}

Json read_json(const std::string& path) {
    try {
        return Json::parse(read_file(path));
    } catch (const Json::parse_error& e) {
        throw InvalidArgument("'" + path + "' is not valid JSON: " + e.what());
    }
}

/// Artifact to `out`, or to stdout when `out` is empty.
void emit(const std::string& out, const Json& j) {
    if (out.empty())
        std::cout << dump(j);
    else
        write_file(out, dump(j));
}

void report_failure(const std::string& code, const std::string& message, const Json& detail = nullptr) {
    Json j = {{"schema", kSchemaVersion}, {"error", code}, {"message", message}};
    if (!detail.is_null()) j["detail"] = detail;
    std::cerr << j.dump() << "\n";
}

/// A catalog name, "random(seed,degree)", an inline polynomial JSON object, or a file holding one.
Poly2 load_surface(const std::string& spec) {
    auto inline_poly = [](const Json& j) {
        const Poly2 phi = poly_from_json(j.contains("surface") ? j.at("surface") : j);
        check_inline_surface(phi);
        return phi;
    };
    if (!spec.empty() && spec.front() == '{') return inline_poly(Json::parse(spec));
    if (std::filesystem::is_regular_file(spec)) return inline_poly(read_json(spec));
    return surface_by_name(spec);
}

/// "a..b" (inclusive, step 1) or a comma-separated list.
std::vector<double> parse_range(const std::string& text) {
    static const std::regex range_re(R"(\s*(-?[0-9.]+)\s*\.\.\s*(-?[0-9.]+)\s*)");
    std::smatch m;
    std::vector<double> out;
    if (std::regex_match(text, m, range_re)) {
        const double a = std::stod(m[1]), b = std::stod(m[2]);
        if (b < a) throw InvalidArgument("empty range '" + text + "'");
        for (double x = a; x <= b + 1e-9; x += 1) out.push_back(x);
        return out;
    }
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw InvalidArgument("bad number '" + item + "' in '" + text + "'");
        }
    }
    if (out.empty()) throw InvalidArgument("empty range '" + text + "'");
    return out;
}

/// Appends config-file entries for every flag not given on the command line.
std::vector<std::string> merge_config(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return args;
    const Json cfg = read_json(path);
    if (!cfg.is_object()) throw InvalidArgument("config file must hold a JSON object");
    auto given = [&](const std::string& flag) {
        return std::any_of(args.begin(), args.end(),
                           [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
    };
    auto scalar = [](const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    for (const auto& [key, value] : cfg.items()) {
        const std::string flag = "--" + key;
        if (key == "config" || given(flag)) continue;
        if (value.is_boolean()) {
            if (value.get<bool>()) args.push_back(flag);
        } else if (value.is_array()) {
            args.push_back(flag);
            for (const auto& v : value) args.push_back(scalar(v));
        } else if (!value.is_null()) {
            args.push_back(flag);
            args.push_back(scalar(value));
        }
    }
    return args;
}

// decompose ---------------------------------------------------------------------------------

struct DecomposeArgs {
    std::string surface, out = "result.json";
    int R = 0;
    double eps = 0.25, K = 1024, alpha = 0.25;
    int grid = 200;
};

Json validation_failures(const ValidationReport& v) {
    Json failed = Json::array();
    if (!v.coverage_ok) failed.push_back("coverage");
    if (!v.width_ok) failed.push_back("width");
    if (!v.admissible_ok) failed.push_back("admissible");
    if (!v.tiny_ok) failed.push_back("tiny");
    if (!v.depth_ok) failed.push_back("depth");
    if (!v.telescoping_ok) failed.push_back("telescoping");
    return failed;
}

int run_decompose(const DecomposeArgs& a) {
    const Poly2 phi = load_surface(a.surface);
    DecomposeConfig cfg;
    cfg.K = a.K;
    cfg.alpha = a.alpha;
    const DecompositionResult res = decompose(phi, a.R, a.eps, cfg);
    const ValidationReport rep = validate(res, phi, a.grid);
    const Json config = {{"surface", a.surface}, {"phi", to_json(phi)}, {"R", a.R},    {"eps", a.eps},
                         {"K", a.K},             {"alpha", a.alpha},    {"grid", a.grid}};
    emit(a.out, artifact("decompose", config, {{"decomposition", to_json(res)}, {"validation", to_json(rep)}}));
    if (!rep.ok()) {
        report_failure("ValidationFailed", "decomposition failed validation", validation_failures(rep));
        return 1;
    }
    return 0;
}

// validate ----------------------------------------------------------------------------------

struct ValidateArgs {
    std::string in, surface, out;
    int grid = 200;
};

int run_validate(const ValidateArgs& a) {
    const Json art = read_json(a.in);
    check_schema(art);
    const DecompositionResult res = decomposition_from_json(art.at("result").at("decomposition"));
    const Poly2 phi = a.surface.empty() ? poly_from_json(art.at("config").at("phi")) : load_surface(a.surface);
    const ValidationReport rep = validate(res, phi, a.grid);
    const Json config = {{"in", std::filesystem::path(a.in).filename().string()},
                         {"surface", a.surface.empty() ? art.at("config").at("surface") : Json(a.surface)},
                         {"phi", to_json(phi)},
                         {"grid", a.grid}};
    emit(a.out, artifact("validate", config, to_json(rep)));
    if (!rep.ok()) {
        report_failure("ValidationFailed", "decomposition failed validation", validation_failures(rep));
        return 1;
    }
    return 0;
}

// verify-restriction ------------------------------------------------------------------------

struct RestrictionArgs {
    std::string surface, spec = "M", out;
    std::vector<int> R;
    double eps = 0.25;
    int trials = 50, grid_cap = 96;
    std::uint64_t seed = 7;
};

int run_restriction(const RestrictionArgs& a, const Globals& g) {
    const Poly2 phi = load_surface(a.surface);
    const MeasureSpec spec = MeasureSpec::from_preset(a.spec, a.eps);
    EnsembleOptions opt;
    opt.trials = a.trials;
    opt.seed = a.seed;
    opt.grid_cap = a.grid_cap;
    Json ensembles = Json::array();
    std::vector<double> Rs, maxima;
    for (int R : a.R) {
        const EnsembleReport rep = restriction_ensemble(phi, R, spec, opt);
        ensembles.push_back(to_json(rep, g.timings));
        Rs.push_back(R);
        maxima.push_back(rep.max);
    }
    Json result = {{"measure", {{"preset", spec.preset}, {"eps", spec.eps}, {"exponent", spec.exponent}}},
                   {"ensembles", ensembles}};
    if (Rs.size() >= 2) {
        const auto [lo, hi] = std::minmax_element(maxima.begin(), maxima.end());
        result["max_over_min"] = number_to_json(*hi / *lo);
        result["slope"] = number_to_json(fit_loglog_slope(Rs, maxima));
    }
    const Json config = {{"surface", a.surface}, {"phi", to_json(phi)}, {"R", a.R},       {"spec", a.spec},
                         {"eps", a.eps},         {"trials", a.trials},  {"seed", a.seed}, {"grid_cap", a.grid_cap}};
    emit(a.out, artifact("verify-restriction", config, result));
    return 0;
}

// verify-decoupling -------------------------------------------------------------------------

struct DecouplingArgs {
    std::string decomposition, surface, out;
    double p = 4;
    int trials = 50, nodes_per_side = 3, grid_n = 0, grid_cap = 64;
    std::uint64_t seed = 7;
};

int run_decoupling(const DecouplingArgs& a, const Globals& g) {
    const Json art = read_json(a.decomposition);
    check_schema(art);
    const DecompositionResult res = decomposition_from_json(art.at("result").at("decomposition"));
    const Poly2 phi = a.surface.empty() ? poly_from_json(art.at("config").at("phi")) : load_surface(a.surface);
    DecouplingOptions opt;
    opt.p = a.p;
    opt.trials = a.trials;
    opt.seed = a.seed;
    opt.nodes_per_side = a.nodes_per_side;
    opt.grid_n = a.grid_n;
    opt.grid_cap = a.grid_cap;
    const DecouplingEnsemble d = decoupling_ensemble(res, phi, opt);
    Json result = to_json(d, g.timings);
    double c_dec = 0;
    Json violations = Json::array();
    for (const auto& f : d.families) {
        c_dec = std::max(c_dec, f.max_scaled);
        if (!f.cs_ok) violations.push_back(f.sigma_exp);
    }
    result["C_dec"] = number_to_json(c_dec);
    result["cs_violations"] = violations;
    const Json config = {{"decomposition", std::filesystem::path(a.decomposition).filename().string()},
                         {"surface", a.surface.empty() ? art.at("config").at("surface") : Json(a.surface)},
                         {"phi", to_json(phi)},
                         {"p", a.p},
                         {"trials", a.trials},
                         {"seed", a.seed},
                         {"nodes_per_side", a.nodes_per_side},
                         {"grid_n", a.grid_n},
                         {"grid_cap", a.grid_cap}};
    emit(a.out, artifact("verify-decoupling", config, result));
    if (!violations.empty()) {
        report_failure("CauchySchwarzViolation", "decoupling ratio left the Cauchy–Schwarz range", violations);
        return 1;
    }
    return 0;
}

// counterexample ----------------------------------------------------------------------------

struct CounterexampleArgs {
    int k = 3;
    double q = 2;
    std::string n = "5..25", out, csv;
};

int run_counterexample(const CounterexampleArgs& a, const Globals& g) {
    const CounterexampleScan s = counterexample_scan(a.k, a.q, parse_range(a.n));
    const Json config = {{"k", a.k}, {"q", a.q}, {"n", a.n}};
    emit(a.out, artifact("counterexample", config, to_json(s, g.timings)));
    if (!a.csv.empty()) {
        std::ostringstream csv;
        csv.precision(10);
        csv << "n,I,lower,ratio,ratio_mean\n";
        for (const auto& r : s.rows) csv << r.n << "," << r.I << "," << r.lower << "," << r.ratio << "," << r.ratio_mean << "\n";
        write_file(a.csv, csv.str());
    }
    if (!(s.increasing && s.c_min > 0)) {
        report_failure("CounterexampleCheckFailed", "ratio is not increasing or the lower constant is not positive");
        return 1;
    }
    return 0;
}

// report ------------------------------------------------------------------------------------

struct ReportArgs {
    std::vector<std::string> in;
    std::string csv, svg;
    bool plot = false;
};

plot::Chart restriction_chart(const Json& art) {
    plot::Chart c{"restriction ratio, " + art.at("config").at("surface").get<std::string>() + ", spec " +
                      art.at("config").at("spec").get<std::string>(),
                  "R", "ratio", true, {}};
    plot::Series mx{"max", {}, {}}, mean{"mean", {}, {}}, mn{"min", {}, {}};
    for (const auto& e : art.at("result").at("ensembles")) {
        const double R = e.at("R");
        mx.x.push_back(R);
        mx.y.push_back(number_from_json(e.at("max")));
        mean.x.push_back(R);
        mean.y.push_back(number_from_json(e.at("mean")));
        mn.x.push_back(R);
        mn.y.push_back(number_from_json(e.at("min")));
    }
    c.series = {mx, mean, mn};
    return c;
}

plot::Chart counterexample_chart(const Json& art) {
    const Json& r = art.at("result");
    plot::Chart c{"counterexample ratio, k = " + r.at("k").dump() + ", q = " + r.at("q").dump(), "n", "ratio", true,
                  {}};
    plot::Series ratio{"ratio", {}, {}}, mean{"ratio (mean |sin|^1/4)", {}, {}};
    for (const auto& row : r.at("rows")) {
        ratio.x.push_back(row.at("n"));
        ratio.y.push_back(number_from_json(row.at("ratio")));
        mean.x.push_back(row.at("n"));
        mean.y.push_back(number_from_json(row.at("ratio_mean")));
    }
    c.series = {ratio, mean};
    return c;
}

plot::Chart decoupling_chart(const std::vector<Json>& arts) {
    plot::Chart c{"decoupling, max over trials of LHS/(σ^-ε RHS)", "R", "scaled ratio", true, {}};
    std::map<int, plot::Series> by_family;
    for (const auto& art : arts) {
        const Json& r = art.at("result");
        for (const auto& f : r.at("families")) {
            const int e = f.at("sigma_exp");
            auto& s = by_family[e];
            s.name = "σ = 2^" + std::to_string(-e);
            s.x.push_back(r.at("R"));
            s.y.push_back(number_from_json(f.at("max_scaled")));
        }
    }
    for (auto& [e, s] : by_family) c.series.push_back(std::move(s));
    return c;
}

int run_report(ReportArgs a) {
    if (a.in.empty()) throw InvalidArgument("report needs at least one --in artifact");
    std::vector<Json> arts;
    for (const auto& path : a.in) {
        arts.push_back(read_json(path));
        check_schema(arts.back());
    }
    const std::string command = arts.front().at("command");
    for (const auto& art : arts)
        if (art.at("command") != command) throw InvalidArgument("report inputs mix different commands");
    if (a.plot) {
        const std::filesystem::path stem = std::filesystem::path(a.in.front()).replace_extension();
        if (a.csv.empty()) a.csv = stem.string() + ".csv";
        if (a.svg.empty()) a.svg = stem.string() + ".svg";
    }

    std::string csv, svg;
    Json summary = {{"command", command}, {"inputs", a.in.size()}};
    if (command == "decompose") {
        const DecompositionResult res = decomposition_from_json(arts.front().at("result").at("decomposition"));
        std::vector<plot::Tile> tiles;
        for (const auto& [e, leaves] : res.families)
            for (const auto& leaf : leaves) tiles.push_back({e, leaf.omega});
        csv = plot::tiles_csv(tiles);
        svg = plot::tiles_svg("decomposition, " + arts.front().at("config").at("surface").get<std::string>() +
                                  ", R = " + arts.front().at("config").at("R").dump(),
                              tiles);
        summary["leaves"] = tiles.size();
        summary["valid"] = arts.front().at("result").at("validation").at("ok");
    } else {
        plot::Chart chart;
        if (command == "verify-restriction")
            chart = restriction_chart(arts.front());
        else if (command == "counterexample")
            chart = counterexample_chart(arts.front());
        else if (command == "verify-decoupling")
            chart = decoupling_chart(arts);
        else
            throw InvalidArgument("no report for command '" + command + "'");
        csv = plot::to_csv(chart);
        svg = plot::to_svg(chart);
        summary["series"] = chart.series.size();
    }
    if (!a.csv.empty()) write_file(a.csv, csv);
    if (!a.svg.empty()) write_file(a.svg, svg);
    if (a.csv.empty() && a.svg.empty())
        std::cout << csv;
    else
        std::cout << summary.dump() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Admissible-parallelogram decompositions and restriction/decoupling ratio checks"};
    app.name("affdec");
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    std::string config_path;
    app.add_option("--config", config_path, "JSON file supplying any flag; command-line flags take precedence");
    app.add_flag("--timings", g.timings, "Include wall-clock runtimes in artifacts");

    DecomposeArgs dec;
    auto* c_dec = app.add_subcommand("decompose", "Build and validate a decomposition");
    c_dec->add_option("--surface", dec.surface, "Catalog name, random(seed,degree), or inline polynomial JSON")
        ->required();
    c_dec->add_option("--R", dec.R, "Scale R")->required()->check(CLI::Range(2, 1 << 20));
    c_dec->add_option("--eps", dec.eps, "Epsilon")->required()->check(CLI::Range(1e-3, 1.0));
    c_dec->add_option("--K", dec.K, "Induction threshold K")->check(CLI::Range(2.0, 1e12));
    c_dec->add_option("--alpha", dec.alpha, "Splitting exponent")->check(CLI::Range(1e-3, 1.0));
    c_dec->add_option("--grid", dec.grid, "Validation grid points per axis")->check(CLI::Range(10, 2000));
    c_dec->add_option("--out", dec.out, "Output artifact");

    ValidateArgs val;
    auto* c_val = app.add_subcommand("validate", "Re-validate a stored decomposition");
    c_val->add_option("--in", val.in, "Decomposition artifact")->required();
    c_val->add_option("--surface", val.surface, "Override the stored surface");
    c_val->add_option("--grid", val.grid, "Validation grid points per axis")->check(CLI::Range(10, 2000));
    c_val->add_option("--out", val.out, "Output artifact (stdout if omitted)");

    RestrictionArgs res;
    auto* c_res = app.add_subcommand("verify-restriction", "Random-phase restriction ratio ensembles");
    c_res->add_option("--surface", res.surface, "Surface")->required();
    c_res->add_option("--R", res.R, "One or more scales")->required()->check(CLI::Range(2, 4096));
    c_res->add_option("--spec", res.spec, "Measure: M, Meps, or a preset name");
    c_res->add_option("--eps", res.eps, "Epsilon for damped measures")->check(CLI::Range(0.0, 1.0));
    c_res->add_option("--trials", res.trials, "Trials per scale")->check(CLI::Range(1, 100000));
    c_res->add_option("--seed", res.seed, "Seed");
    c_res->add_option("--grid-cap", res.grid_cap, "Grid points per axis cap")->check(CLI::Range(8, 512));
    c_res->add_option("--out", res.out, "Output artifact (stdout if omitted)");

    DecouplingArgs cpl;
    auto* c_cpl = app.add_subcommand("verify-decoupling", "Random-phase decoupling ratios per σ-family");
    c_cpl->add_option("--decomposition", cpl.decomposition, "Decomposition artifact")->required();
    c_cpl->add_option("--surface", cpl.surface, "Override the stored surface");
    c_cpl->add_option("--p", cpl.p, "Exponent p")->check(CLI::Range(1.0, 64.0));
    c_cpl->add_option("--trials", cpl.trials, "Trials per family")->check(CLI::Range(1, 100000));
    c_cpl->add_option("--seed", cpl.seed, "Seed");
    c_cpl->add_option("--nodes-per-side", cpl.nodes_per_side, "Nodes per leaf side")->check(CLI::Range(1, 16));
    c_cpl->add_option("--grid-n", cpl.grid_n, "Grid points per axis, 0 for automatic")->check(CLI::Range(0, 256));
    c_cpl->add_option("--grid-cap", cpl.grid_cap, "Cap for the automatic grid")->check(CLI::Range(8, 256));
    c_cpl->add_option("--out", cpl.out, "Output artifact (stdout if omitted)");

    CounterexampleArgs ce;
    auto* c_ce = app.add_subcommand("counterexample", "Scan the counterexample integral and ratio");
    c_ce->add_option("--k", ce.k, "Oscillation order k ≥ 3");
    c_ce->add_option("--q", ce.q, "Exponent q ≥ 1");
    c_ce->add_option("--n", ce.n, "Range a..b or comma list");
    c_ce->add_option("--out", ce.out, "Output artifact (stdout if omitted)");
    c_ce->add_option("--csv", ce.csv, "Table CSV");

    ReportArgs rep;
    auto* c_rep = app.add_subcommand("report", "CSV and SVG from stored artifacts");
    c_rep->add_option("--in", rep.in, "Artifacts; several verify-decoupling runs plot against R")->required();
    c_rep->add_flag("--plot", rep.plot, "Write CSV and SVG next to the first input");
    c_rep->add_option("--csv", rep.csv, "CSV path");
    c_rep->add_option("--svg", rep.svg, "SVG path");

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = merge_config(std::move(args));
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        report_failure("InvalidArgument", e.what());
        return 1;
    } catch (const Error& e) {
        report_failure(e.code(), e.what());
        return 1;
    }

    try {
        if (*c_dec) return run_decompose(dec);
        if (*c_val) return run_validate(val);
        if (*c_res) return run_restriction(res, g);
        if (*c_cpl) return run_decoupling(cpl, g);
        if (*c_ce) return run_counterexample(ce, g);
        if (*c_rep) return run_report(rep);
    } catch (const Error& e) {
        report_failure(e.code(), e.what());
        return 1;
    } catch (const Json::exception& e) {
        report_failure("InvalidArgument", std::string("malformed artifact: ") + e.what());
        return 1;
    } catch (const std::exception& e) {
        report_failure("InternalError", e.what());
        return 1;
    }
    return 1;
}
