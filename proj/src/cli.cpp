#include "mobius/cli.hpp"

#include "mobius/arithfn.hpp"
#include "mobius/construct.hpp"
#include "mobius/density.hpp"
#include "mobius/errors.hpp"
#include "mobius/experiment.hpp"
#include "mobius/io.hpp"
#include "mobius/kernels.hpp"
#include "mobius/sieve.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;

namespace mobius::cli {

namespace {

using io::json;

struct RunConfig {
    std::uint64_t limit = 1'000'000;
    double ratio = 2.0;
    std::uint64_t min_x = 1000;
    std::uint64_t seed = 20240101;
    std::string out_dir;
    std::string format = "json";

    CheckpointPlan plan() const { return CheckpointPlan::geometric(limit, ratio, min_x); }

    json to_json() const
    {
        return {{"limit", limit}, {"ratio", ratio}, {"min_x", min_x}, {"seed", seed}, {"out_dir", out_dir},
                {"format", format}};
    }
};

// Outputs produced by one invocation, listed in the manifest.
struct Run {
    std::vector<std::string> args;
    std::string command;
    RunConfig config;
    json params = json::object();
    std::vector<std::string> outputs;
    std::ostream& out;
    std::ostream& err;

    fs::path path(const std::string& file) const { return fs::path(config.out_dir) / file; }

    void wrote(const fs::path& p) { outputs.push_back(p.string()); }

    void write_manifest()
    {
        json m = {{"command", command},
                  {"args", args},
                  {"config", config.to_json()},
                  {"params", params},
                  {"outputs", outputs},
                  {"versions",
                   {{"mobius", kVersion},
                    {"compiler", __VERSION__},
                    {"cplusplus", __cplusplus},
#ifdef _OPENMP
                    {"openmp", _OPENMP},
#endif
                    {"max_threads", kernels::max_threads()}}}};
        const auto p = path(command + ".manifest.json");
        io::write_json(p, m);
    }
};

void add_run_options(CLI::App* app, RunConfig& cfg, bool with_plan)
{
    app->add_option("--limit", cfg.limit, "Range [1, N]")->capture_default_str();
    if (with_plan) {
        app->add_option("--ratio", cfg.ratio, "Geometric checkpoint ratio")->capture_default_str();
        app->add_option("--min-x", cfg.min_x, "Smallest checkpoint")->capture_default_str();
    }
    app->add_option("--seed", cfg.seed, "Seed for randomized parts")->capture_default_str();
    app->add_option("--out-dir", cfg.out_dir, "Output directory");
    app->add_option("--format", cfg.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
}

void validate(const RunConfig& cfg, bool with_plan)
{
    if (with_plan && cfg.limit < 1000)
        throw ArgumentError("--limit must be at least 1000");
    if (cfg.limit < 1)
        throw ArgumentError("--limit must be positive");
    if (with_plan && cfg.min_x < 10)
        throw ArgumentError("--min-x must be at least 10");
    if (with_plan && !(cfg.ratio > 1.0))
        throw ArgumentError("--ratio must exceed 1");
}

std::string resolve_out_dir(const std::string& flag)
{
    if (!flag.empty())
        return flag;
    if (const char* env = std::getenv(kOutDirEnv); env && *env)
        return env;
    return kDefaultOutDir;
}

SieveTables sieve_for(std::uint64_t limit)
{
    return build_sieve(std::max<std::uint64_t>(limit, 2));
}

// ---------------------------------------------------------------------------

int cmd_sieve(Run& run, const std::string& dump, const std::string& output)
{
    const auto& cfg = run.config;
    const auto tables = sieve_for(cfg.limit);
    run.params = {{"dump", dump}};

    auto emit = [&](std::ostream& o) {
        o << "n,value\n";
        if (dump == "primes") {
            std::uint64_t rank = 0;
            for (auto p : tables.primes()) {
                if (p > cfg.limit)
                    break;
                o << ++rank << ',' << p << '\n';
            }
            return rank;
        }
        for (std::uint64_t n = 1; n <= cfg.limit; ++n)
            o << n << ',' << (dump == "mu" ? static_cast<std::int64_t>(tables.mu(n)) : static_cast<std::int64_t>(tables.spf(n)))
              << '\n';
        return cfg.limit;
    };

    std::uint64_t rows = 0;
    std::string where = "stdout";
    if (output == "-") {
        rows = emit(run.out);
    } else {
        const fs::path p = output.empty() ? run.path("sieve-" + dump + ".csv") : fs::path(output);
        if (p.has_parent_path())
            fs::create_directories(p.parent_path());
        std::ofstream f(p);
        if (!f)
            throw ArgumentError("cannot write " + p.string());
        rows = emit(f);
        run.wrote(p);
        where = p.string();
    }
    run.write_manifest();
    (output == "-" ? run.err : run.out) << "sieve: " << rows << " rows of " << dump << " -> " << where << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------

ArithFunction load_input(const std::string& input, const std::string& preset, std::optional<std::uint64_t> limit,
                         const SieveTables* tables)
{
    if (!input.empty() && !preset.empty())
        throw ArgumentError("give either --input or --preset, not both");
    if (input.empty() && preset.empty())
        throw ArgumentError("an input function is required (--input or --preset)");
    if (!preset.empty()) {
        if (!limit)
            throw ArgumentError("--preset needs --limit");
        return g_preset(preset, *tables, *limit);
    }
    auto f = io::read_function_csv(input);
    if (limit) {
        if (*limit > f.limit())
            throw RangeError("--limit " + std::to_string(*limit) + " exceeds the " + std::to_string(f.limit()) +
                             " rows of " + input);
        if (*limit < f.limit())
            f = f.truncated(*limit);
    }
    return f;
}

int cmd_transform(Run& run, const std::string& input, const std::string& preset, const std::string& op,
                  bool limit_given, const std::string& output)
{
    const auto& cfg = run.config;
    std::optional<std::uint64_t> limit;
    if (limit_given)
        limit = cfg.limit;

    std::string kind = op;
    std::optional<std::uint64_t> y;
    if (const auto colon = op.find(':'); colon != std::string::npos) {
        kind = op.substr(0, colon);
        const auto ys = io::parse_list(op.substr(colon + 1));
        if (ys.size() != 1)
            throw ArgumentError("bad truncation level in '" + op + "'");
        y = ys.front();
    }
    const bool truncated = kind == "trunc-dirichlet" || kind == "trunc-moebius";
    if (kind != "dirichlet" && kind != "moebius" && !truncated)
        throw ArgumentError("unknown --op '" + op + "'");
    if (truncated != y.has_value())
        throw ArgumentError("--op " + kind + (truncated ? " needs ':y'" : " takes no ':y'"));

    std::optional<SieveTables> tables;
    const bool needs_tables = !preset.empty() || kind == "moebius" || kind == "trunc-moebius";
    // The sieve is sized to the function, which is only known after loading a file.
    if (!preset.empty())
        tables.emplace(sieve_for(cfg.limit));
    auto g = load_input(input, preset, limit, tables ? &*tables : nullptr);
    if (needs_tables && !tables)
        tables.emplace(sieve_for(g.limit()));

    ArithFunction result;
    if (kind == "dirichlet")
        result = dirichlet_transform(g);
    else if (kind == "moebius")
        result = moebius_transform(g, *tables);
    else if (kind == "trunc-dirichlet")
        result = truncated_dirichlet(g, *y);
    else
        result = truncated_moebius(g, *y, *tables);

    run.params = {{"op", op}, {"input", input.empty() ? "preset:" + preset : input}, {"limit", g.limit()}};
    std::string where = "stdout";
    if (output == "-") {
        io::write_function_csv(run.out, result);
    } else {
        const fs::path p = output.empty() ? run.path("transform-" + kind + ".csv") : fs::path(output);
        io::write_function_csv(p, result);
        run.wrote(p);
        where = p.string();
    }
    run.write_manifest();
    (output == "-" ? run.err : run.out) << "transform: " << op << " on [1, " << g.limit() << "], support "
                                        << result.support().size() << " -> " << where << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct DensityArgs {
    std::string op;
    std::string input;
    std::string preset;
    std::string set;
    std::string thresholds;
    std::string a = "2,3,5";
    std::string s;
    std::string t;
    double delta = 0.5;
    std::uint64_t y = 0;
    bool absolute = false;
    double tolerance = -1.0;
};

json verdict_json(const std::vector<Criterion>& criteria)
{
    json a = json::array();
    bool ok = true;
    for (const auto& c : criteria) {
        a.push_back(io::to_json(c));
        ok = ok && c.status != Status::fail;
    }
    return {{"criteria", std::move(a)}, {"overall", ok ? "pass" : "fail"}};
}

int cmd_density(Run& run, const DensityArgs& d)
{
    const auto& cfg = run.config;
    const auto plan = cfg.plan();
    const auto tables = sieve_for(cfg.limit);
    json params = {{"op", d.op}, {"limit", cfg.limit}};
    json extra = json::object();
    std::vector<Criterion> criteria;
    DensityEstimate est;
    // Rows written as x,count,ratio when the op produces no DensityEstimate.
    std::vector<Checkpoint> rows;
    bool has_estimate = true;

    auto function = [&] {
        params["input"] = d.input.empty() ? "preset:" + d.preset : d.input;
        return load_input(d.input, d.preset, cfg.limit, &tables);
    };
    auto set = [&] {
        auto v = normalized_set(io::parse_list(d.set));
        if (v.empty())
            throw ArgumentError("--set is required and must be nonempty");
        params["set"] = io::format_list(v);
        return v;
    };
    auto tol = [&](double fallback) { return d.tolerance >= 0 ? d.tolerance : fallback; };

    if (d.op == "support") {
        est = support_density(function(), plan);
        extra = {{"upper_proxy", est.upper_proxy()}, {"lower_proxy", est.lower_proxy()}};
    } else if (d.op == "mean") {
        params["absolute"] = d.absolute;
        est = mean_value(function(), plan, d.absolute);
        extra = {{"upper_proxy", est.upper_proxy()}, {"lower_proxy", est.lower_proxy()}};
    } else if (d.op == "reciprocal-sum") {
        const auto a = set();
        has_estimate = false;
        for (const auto& p : reciprocal_sum_partial(a, plan)) {
            const auto count = std::upper_bound(a.begin(), a.end(), p.x) - a.begin();
            rows.push_back({p.x, count, p.sum});
        }
    } else if (d.op == "multiples") {
        const auto a = set();
        est = set_of_multiples(a, plan).density;
        const double bound = heilbronn_rohrbach_bound(a);
        extra = {{"heilbronn_rohrbach_bound", bound}};
        criteria.push_back(Criterion::check("below_heilbronn_rohrbach_bound", est.final_ratio, Relation::le,
                                            bound + 2.0 / std::sqrt(static_cast<double>(cfg.limit))));
    } else if (d.op == "lemma3") {
        const Lemma3Query q(io::parse_list(d.a), io::parse_list(d.s), io::parse_list(d.t));
        params["A"] = io::format_list(q.A);
        params["S"] = io::format_list(q.S);
        params["T"] = io::format_list(q.T);
        est = lemma3_density_empirical(q, tables, plan);
        const auto f = lemma3_density_formula(q, plan);
        const auto c = chi_expansion_count(q, tables, plan);
        std::uint64_t bad = 0;
        for (std::size_t i = 0; i < est.checkpoints.size(); ++i)
            if (est.checkpoints[i].count != f.combined.checkpoints[i].count ||
                est.checkpoints[i].count != c.checkpoints[i].count)
                ++bad;
        extra = {{"formula_terms", f.terms.size()}};
        criteria.push_back(Criterion::check("three_route_agreement", static_cast<double>(bad), Relation::eq, 0.0));
    } else if (d.op == "landau") {
        const auto p = normalized_set(io::parse_list(d.set));
        params["primes"] = io::format_list(p);
        est = squarefree_coprime_density(p, plan, tables);
        const double formula = landau_density(p);
        extra = {{"formula", formula}};
        criteria.push_back(Criterion::check("landau_formula", std::abs(est.final_ratio - formula), Relation::lt,
                                            tol(5e-3)));
    } else if (d.op == "kronecker") {
        const auto h = function();
        const double t = tol(1e-2);
        const auto k = kronecker_check(h, plan, t, t);
        has_estimate = false;
        json pts = json::array();
        for (const auto& p : k.points) {
            rows.push_back({p.x, p.h_sum, p.h_ratio});
            pts.push_back({{"x", p.x}, {"g_sum", p.g_sum}, {"h_sum", p.h_sum}, {"h_ratio", p.h_ratio}});
        }
        extra = {{"kronecker_points", std::move(pts)}, {"g_tail_oscillation", k.g_tail_oscillation}};
        criteria.push_back(Criterion::check("g_settles", k.g_tail_oscillation, Relation::lt, t));
        criteria.push_back(Criterion::check("h_mean_zero", std::abs(k.final_h_ratio), Relation::lt, t));
    } else if (d.op == "evaporating") {
        const auto a = set();
        auto thresholds = normalized_set(io::parse_list(d.thresholds));
        if (thresholds.empty())
            for (std::uint64_t m = 2; m <= cfg.limit; m *= 2)
                thresholds.push_back(m);
        params["thresholds"] = io::format_list(thresholds);
        has_estimate = false;
        double worst = -INFINITY;
        double prev = INFINITY;
        for (const auto& level : evaporating_profile(a, thresholds, CheckpointPlan({cfg.limit}))) {
            const auto& c = level.density.checkpoints.back();
            rows.push_back({level.threshold, c.count, c.ratio});
            if (prev != INFINITY)
                worst = std::max(worst, c.ratio - prev);
            prev = c.ratio;
        }
        if (rows.size() >= 2)
            criteria.push_back(Criterion::check("profile_nonincreasing", worst, Relation::le, 0.0));
    } else if (d.op == "growth") {
        const auto a = set();
        params["delta"] = d.delta;
        has_estimate = false;
        for (const auto& g : log_power_growth(a, d.delta, plan))
            rows.push_back({g.x, g.count, g.value});
    } else if (d.op == "wintner") {
        const auto g = function();
        const std::uint64_t y = d.y ? d.y : g.limit();
        params["y"] = y;
        const auto w = wintner_prediction(g, y);
        const auto f = dirichlet_transform(g);
        est = mean_value(f, plan, false);
        extra = {{"signed_sum", w.signed_sum}, {"absolute_sum", w.absolute_sum}};
        criteria.push_back(Criterion::check("wintner_mean", std::abs(est.final_ratio - w.signed_sum), Relation::le,
                                            tol(1e-2)));
    } else {
        throw ArgumentError("unknown density op '" + d.op + "'");
    }

    if (has_estimate)
        rows = est.checkpoints;
    const std::string stem = "density-" + d.op;
    fs::path p;
    if (cfg.format == "csv") {
        p = run.path(stem + ".csv");
        fs::create_directories(p.parent_path());
        std::ofstream f(p);
        io::write_checkpoints_csv(f, DensityEstimate{rows, 0.0, 0.0});
    } else {
        json cps = json::array();
        for (const auto& c : rows)
            cps.push_back({{"x", c.x}, {"count", c.count}, {"ratio", c.ratio}});
        json j = {{"op", d.op},
                  {"params", params},
                  {"checkpoints", std::move(cps)},
                  {"verdict", criteria.empty() ? json(nullptr) : verdict_json(criteria)}};
        if (has_estimate) {
            j["final_ratio"] = est.final_ratio;
            j["tail_oscillation"] = est.tail_oscillation;
        }
        j.update(extra);
        p = run.path(stem + ".json");
        io::write_json(p, j);
    }
    run.wrote(p);
    run.params = params;
    run.write_manifest();

    const bool failed =
        std::any_of(criteria.begin(), criteria.end(), [](const Criterion& c) { return c.status == Status::fail; });
    run.out << "density " << d.op << ": " << rows.size() << " rows";
    if (!rows.empty())
        run.out << ", last x=" << rows.back().x << " value=" << rows.back().ratio;
    if (!criteria.empty())
        run.out << ", verdict " << (failed ? "fail" : "pass");
    run.out << " -> " << p.string() << '\n';
    return failed ? kExitVerdictFailed : kExitOk;
}

// ---------------------------------------------------------------------------

ZFunction parse_z(const std::string& text)
{
    if (text == "log")
        return ZFunction::log();
    if (text == "loglog")
        return ZFunction::loglog();
    if (text.rfind("log-power:", 0) == 0) {
        try {
            return ZFunction::log_power(std::stod(text.substr(10)));
        } catch (const std::logic_error&) {
            throw ArgumentError("bad exponent in '" + text + "'");
        }
    }
    if (text.rfind("table:", 0) == 0)
        return io::read_z_table(text.substr(6));
    throw ArgumentError("unknown Z '" + text + "' (log, loglog, log-power:e, table:file)");
}

int write_construction(Run& run, const std::string& stem, const ConstructionReport& r)
{
    const auto jp = run.path(stem + ".json");
    const auto fp = run.path(stem + ".f.csv");
    const auto gp = run.path(stem + ".g.csv");
    io::write_json(jp, io::to_json(r));
    io::write_function_csv(fp, r.pair.f());
    io::write_function_csv(gp, r.pair.g());
    run.wrote(jp);
    run.wrote(fp);
    run.wrote(gp);
    run.write_manifest();
    run.out << stem << ": " << r.construction << ", predicted supp f density " << r.predicted_f_density;
    if (r.predicted_g_density)
        run.out << ", supp g density " << *r.predicted_g_density;
    run.out << " -> " << jp.string() << '\n';
    return kExitOk;
}

int cmd_construct_prescribed(Run& run, double alpha, double beta, double tol)
{
    const auto& cfg = run.config;
    run.params = {{"alpha", alpha}, {"beta", beta}, {"tol", tol}};
    const auto tables = sieve_for(cfg.limit);
    return write_construction(run, "construct-prescribed",
                              construct_prescribed_pair(alpha, beta, tol, cfg.limit, tables));
}

int cmd_construct_greedy(Run& run, const std::string& z_text)
{
    const auto& cfg = run.config;
    const auto z = parse_z(z_text);
    run.params = {{"z", z_text}};
    const auto tables = sieve_for(cfg.limit);
    return write_construction(run, "construct-greedy-thin", greedy_thin_support_pair(z, cfg.limit, tables));
}

// ---------------------------------------------------------------------------

struct ExperimentArgs {
    std::string name;
    std::string g = "squares";
    std::string g_input;
    std::optional<double> tolerance;
    std::optional<double> density_tolerance;
    std::string y_list;
    std::optional<double> reference_mean;
    std::string z = "log";
    std::uint64_t x0 = 100;
    double alpha = 0.6;
    double beta = 0.7;
    std::uint64_t y = 10;
};

ExperimentReport run_named(const ExperimentArgs& a, const SieveTables& tables, const CheckpointPlan& plan,
                           std::uint64_t seed)
{
    auto g_fn = [&] {
        if (!a.g_input.empty())
            return load_input(a.g_input, "", plan.back(), &tables);
        return g_preset(a.g, tables, plan.back());
    };
    if (a.name == "theorem1") {
        Theorem1Options o;
        if (a.tolerance)
            o.tolerance = *a.tolerance;
        return run_theorem1(g_fn(), tables, plan, o);
    }
    if (a.name == "theorem2") {
        Theorem2Options o;
        o.y_list = io::parse_list(a.y_list);
        if (a.tolerance)
            o.mean_tolerance = o.wintner_tolerance = *a.tolerance;
        o.reference_abs_mean = a.reference_mean;
        return run_theorem2(g_fn(), tables, plan, o);
    }
    if (a.name == "prop-best") {
        PropBestOptions o;
        o.x0 = a.x0;
        return run_prop_best(parse_z(a.z), tables, plan, o);
    }
    if (a.name == "theorem3") {
        Theorem3Options o;
        if (a.tolerance)
            o.tolerance = *a.tolerance;
        if (a.density_tolerance)
            o.density_tolerance = *a.density_tolerance;
        return run_theorem3(a.alpha, a.beta, tables, plan, o);
    }
    if (a.name == "primes-demo")
        return run_primes_demo(a.y, tables, plan);
    if (a.name == "lemma-checks") {
        LemmaChecksOptions o;
        o.seed = seed;
        return run_lemma_checks(tables, plan, o);
    }
    throw ArgumentError("unknown experiment '" + a.name + "'");
}

void write_series_csv(const fs::path& p, const Series& s)
{
    fs::create_directories(p.parent_path());
    std::ofstream f(p);
    f.precision(17);
    f << "x,count,value\n";
    for (const auto& pt : s.points) {
        f << pt.x << ',';
        if (pt.count)
            f << *pt.count;
        f << ',' << pt.value << '\n';
    }
}

std::string summarize(const ExperimentReport& r)
{
    std::size_t failed = 0, inconclusive = 0;
    for (const auto& c : r.criteria) {
        failed += c.status == Status::fail;
        inconclusive += c.status == Status::inconclusive;
    }
    std::string s = r.name + ": " + (r.passed() ? "pass" : "fail") + " (" + std::to_string(r.criteria.size()) +
                    " criteria, " + std::to_string(failed) + " failed, " + std::to_string(inconclusive) +
                    " inconclusive";
    if (!r.warnings.empty())
        s += ", " + std::to_string(r.warnings.size()) + " warnings";
    return s + ")";
}

void emit_report(Run& run, const ExperimentReport& r)
{
    const auto p = run.path(r.name + ".json");
    io::write_json(p, io::to_json(r));
    run.wrote(p);
    if (run.config.format == "csv")
        for (const auto& s : r.series) {
            const auto sp = run.path(r.name + "." + s.label + ".csv");
            write_series_csv(sp, s);
            run.wrote(sp);
        }
    run.out << summarize(r) << " -> " << p.string() << '\n';
    for (const auto& c : r.criteria)
        if (c.status == Status::fail)
            run.err << "  failed " << r.name << "/" << c.id << ": observed " << c.observed << ' '
                    << to_string(c.relation) << ' ' << c.threshold << '\n';
}

int cmd_experiment_run(Run& run, const ExperimentArgs& a)
{
    const auto& cfg = run.config;
    const auto tables = sieve_for(cfg.limit);
    const auto report = run_named(a, tables, cfg.plan(), cfg.seed);
    run.params = {{"name", a.name}, {"report_params", report.params}};
    emit_report(run, report);
    run.write_manifest();
    return report.passed() ? kExitOk : kExitVerdictFailed;
}

int cmd_experiment_all(Run& run)
{
    const auto& cfg = run.config;
    const auto tables = sieve_for(cfg.limit);
    const auto reports = run_all(tables, cfg.plan(), cfg.seed);
    bool ok = true;
    json names = json::array();
    for (const auto& r : reports) {
        emit_report(run, r);
        ok = ok && r.passed();
        names.push_back(r.name);
    }
    run.params = {{"experiments", names}};
    run.write_manifest();
    run.out << "experiment all: " << (ok ? "pass" : "fail") << '\n';
    return ok ? kExitOk : kExitVerdictFailed;
}

} // namespace

// ---------------------------------------------------------------------------

int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Moebius pairs and support densities on [1, N]", "mobius"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    RunConfig cfg;
    std::string command;

    // sieve
    auto* sieve = app.add_subcommand("sieve", "Dump sieve tables as n,value CSV");
    std::string dump;
    std::string sieve_output;
    add_run_options(sieve, cfg, false);
    sieve->add_option("--dump", dump, "mu, spf or primes")->required()->check(CLI::IsMember({"mu", "spf", "primes"}));
    sieve->add_option("--output", sieve_output, "File, or - for stdout");

    // transform
    auto* transform = app.add_subcommand("transform", "Dirichlet / Moebius transforms of a CSV function");
    std::string t_input, t_preset, t_op, t_output;
    add_run_options(transform, cfg, false);
    transform->add_option("--input", t_input, "n,value CSV")->check(CLI::ExistingFile);
    transform->add_option("--preset", t_preset, "Named function instead of --input");
    transform->add_option("--op", t_op, "dirichlet | moebius | trunc-dirichlet:y | trunc-moebius:y")->required();
    transform->add_option("--output", t_output, "File, or - for stdout");

    // density
    auto* density = app.add_subcommand("density", "Density estimates along a checkpoint plan");
    DensityArgs dargs;
    add_run_options(density, cfg, true);
    density
        ->add_option("op", dargs.op,
                     "support | mean | reciprocal-sum | multiples | lemma3 | landau | kronecker | evaporating | "
                     "growth | wintner")
        ->required();
    density->add_option("--input", dargs.input, "n,value CSV")->check(CLI::ExistingFile);
    density->add_option("--preset", dargs.preset, "Named function instead of --input");
    density->add_option("--set", dargs.set, "Comma separated set (primes for landau)");
    density->add_option("--thresholds", dargs.thresholds, "Thresholds for evaporating");
    density->add_option("--a", dargs.a, "A for lemma3")->capture_default_str();
    density->add_option("--s", dargs.s, "S for lemma3");
    density->add_option("--t", dargs.t, "T for lemma3");
    density->add_option("--delta", dargs.delta, "Exponent for growth")->capture_default_str();
    density->add_option("--y", dargs.y, "Truncation for wintner");
    density->add_flag("--absolute", dargs.absolute, "Mean of |f|");
    density->add_option("--tolerance", dargs.tolerance, "Tolerance for landau, kronecker, wintner");

    // construct
    auto* construct = app.add_subcommand("construct", "Build Moebius pairs");
    construct->require_subcommand(1);
    auto* prescribed = construct->add_subcommand("prescribed", "Support densities alpha and beta");
    double alpha = 0.6, beta = 0.7, tol = kDefaultGreedyTolerance;
    add_run_options(prescribed, cfg, false);
    prescribed->add_option("--alpha", alpha)->required()->check(CLI::Range(0.0, 1.0));
    prescribed->add_option("--beta", beta)->required()->check(CLI::Range(0.0, 1.0));
    prescribed->add_option("--tol", tol)->capture_default_str();
    auto* greedy = construct->add_subcommand("greedy-thin", "Thin supp(g) below a growth function Z");
    std::string z_text = "log";
    add_run_options(greedy, cfg, false);
    greedy->add_option("--z", z_text, "log | loglog | log-power:e | table:file")->capture_default_str();

    // experiment
    auto* experiment = app.add_subcommand("experiment", "Named experiments with verdicts");
    experiment->require_subcommand(1);
    auto* exp_run = experiment->add_subcommand("run", "Run one experiment");
    ExperimentArgs eargs;
    std::vector<std::string> names(std::begin(kExperimentNames), std::end(kExperimentNames));
    add_run_options(exp_run, cfg, true);
    exp_run->add_option("name", eargs.name)->required()->check(CLI::IsMember(names));
    exp_run->add_option("--g", eargs.g, "g preset: " + [] {
        std::string s;
        for (const auto& n : g_preset_names())
            s += (s.empty() ? "" : ", ") + n;
        return s;
    }())->capture_default_str();
    exp_run->add_option("--g-input", eargs.g_input, "g as n,value CSV")->check(CLI::ExistingFile);
    exp_run->add_option("--tolerance", eargs.tolerance);
    exp_run->add_option("--density-tolerance", eargs.density_tolerance);
    exp_run->add_option("--y-list", eargs.y_list, "Truncation levels for theorem2");
    exp_run->add_option("--reference-mean", eargs.reference_mean, "Expected mean |f| for theorem2");
    exp_run->add_option("--z", eargs.z)->capture_default_str();
    exp_run->add_option("--x0", eargs.x0)->capture_default_str();
    exp_run->add_option("--alpha", eargs.alpha)->capture_default_str()->check(CLI::Range(0.0, 1.0));
    exp_run->add_option("--beta", eargs.beta)->capture_default_str()->check(CLI::Range(0.0, 1.0));
    exp_run->add_option("--y", eargs.y, "y for primes-demo")->capture_default_str();
    auto* exp_all = experiment->add_subcommand("all", "Run every experiment");
    add_run_options(exp_all, cfg, true);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n";
        const CLI::App* sub = &app;
        while (true) {
            const auto subs = sub->get_subcommands();
            if (subs.empty())
                break;
            sub = subs.front();
        }
        err << sub->help();
        return kExitUsage;
    }

    cfg.out_dir = resolve_out_dir(cfg.out_dir);
    Run run{args, "", cfg, json::object(), {}, out, err};
    try {
        if (sieve->parsed()) {
            run.command = "sieve";
            validate(cfg, false);
            return cmd_sieve(run, dump, sieve_output);
        }
        if (transform->parsed()) {
            run.command = "transform";
            validate(cfg, false);
            return cmd_transform(run, t_input, t_preset, t_op, transform->count("--limit") > 0, t_output);
        }
        if (density->parsed()) {
            run.command = "density-" + dargs.op;
            validate(cfg, true);
            return cmd_density(run, dargs);
        }
        if (prescribed->parsed()) {
            run.command = "construct-prescribed";
            validate(cfg, true);
            return cmd_construct_prescribed(run, alpha, beta, tol);
        }
        if (greedy->parsed()) {
            run.command = "construct-greedy-thin";
            validate(cfg, true);
            return cmd_construct_greedy(run, z_text);
        }
        if (exp_run->parsed()) {
            run.command = "experiment-" + eargs.name;
            validate(cfg, true);
            return cmd_experiment_run(run, eargs);
        }
        if (exp_all->parsed()) {
            run.command = "experiment-all";
            validate(cfg, true);
            return cmd_experiment_all(run);
        }
    } catch (const CapacityError& e) {
        err << "capacity: " << e.what() << '\n';
        return kExitCapacity;
    } catch (const OverflowError& e) {
        err << "overflow: " << e.what() << '\n';
        return kExitCapacity;
    } catch (const InsufficientPoolError& e) {
        err << "insufficient prime pool: " << e.what() << '\n';
        return kExitCapacity;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    err << app.help();
    return kExitUsage;
}

int parse_and_dispatch(int argc, const char* const* argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return parse_and_dispatch(args, std::cout, std::cerr);
}

} // namespace mobius::cli
