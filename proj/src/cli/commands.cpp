#include "cantor_ei/cli.hpp"

#include "cantor_ei/digraph_ifs.hpp"
#include "cantor_ei/errors.hpp"
#include "cantor_ei/estimator.hpp"
#include "cantor_ei/ifs.hpp"
#include "cantor_ei/piecewise_map.hpp"
#include "cantor_ei/substitution_matrix.hpp"
#include "cantor_ei/theory.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>

namespace cantor_ei::cli {

namespace {

struct Globals {
    std::string config;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    bool quiet = false;
    std::string output;
    int max_depth = 20;
    std::size_t max_denominator_bits = 4096;
    std::size_t max_matrix_dim = 2'000'000;
    std::uint64_t max_operations = 0;
};

struct Context {
    const Globals& globals;
    std::string canonical;
    std::ostream& out;
    std::ostream& err;
    std::unique_ptr<OperationBudget> budget;

    ExactContext exact() const
    {
        ExactContext ctx;
        ctx.limits.max_depth = globals.max_depth;
        ctx.limits.max_denominator_bits = globals.max_denominator_bits;
        ctx.budget = budget.get();
        return ctx;
    }

    void log(const std::string& msg) const
    {
        if (!globals.quiet) err << msg << '\n';
    }
};

class Stopwatch {
public:
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Sorted "key=value" of every option that changes the data.
std::string canonical_config(const CLI::App& root, const CLI::App& sub)
{
    static const std::vector<std::string> skip{"help", "version", "config", "threads", "quiet", "output"};
    std::map<std::string, std::string> kv;
    auto collect = [&](const CLI::App& app) {
        for (const CLI::Option* opt : app.get_options()) {
            std::string name = opt->get_single_name();
            if (name.empty() || std::find(skip.begin(), skip.end(), name) != skip.end()) continue;
            std::string value;
            if (opt->count() > 0) {
                for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
            } else {
                value = opt->get_default_str();
            }
            kv[name] = value;
        }
    };
    collect(root);
    collect(sub);
    std::string s = sub.get_name();
    for (const auto& [k, v] : kv) s += " " + k + "=" + v;
    return s;
}

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

PiecewiseMap resolve_float_map(const std::string& id)
{
    if (starts_with(id, "ifs:")) {
        AffineMap f = compatible_map(load_ifs(id.substr(4)));
        return PiecewiseMap(AffineMap(id, f.branches()));
    }
    return make_map(id);
}

struct ExactTarget {
    AffineMap map;
    std::optional<AffineIFS> ifs;
};

ExactTarget resolve_exact_map(const std::string& id)
{
    if (starts_with(id, "ifs:")) {
        AffineIFS ifs = load_ifs(id.substr(4));
        AffineMap f = compatible_map(ifs);
        return {AffineMap(id, f.branches()), ifs};
    }
    return {make_affine_map(id), std::nullopt};
}

int mod1_multiplier(const std::string& id)
{
    if (!starts_with(id, "mx_mod1:")) return 0;
    return std::stoi(id.substr(8));
}

int auto_gaps(const std::string& id, int level)
{
    if (int m = mod1_multiplier(id)) {
        if (is_power_of_three(m)) return compatible_q_schedule(three_adic_valuation(m), level - three_adic_valuation(m) + 1);
        return q_schedule(m, level);
    }
    return level;
}

// ---------------------------------------------------------------- simulate

struct SimulateOptions {
    std::string map = "mx_mod1:3";
    std::string observable;
    std::size_t n = 50'000;
    std::size_t ell = 500;
    std::uint64_t seed = 1;
    long burnin = -1;
    int cap = 100;
    std::string dump_dir;
};

Observable pick_observable(const std::string& requested, const std::string& map_id)
{
    if (!requested.empty()) return parse_observable(requested);
    return map_id == "quadratic_compatible" ? Observable::escape : Observable::ladder;
}

void add_simulation_options(CLI::App* sub, SimulateOptions& o)
{
    sub->add_option("--map", o.map, "map id: mx_mod1:M, mixed_linear, nonlinear, gauss, rotation, quadratic_compatible, ifs:FILE");
    sub->add_option("--observable", o.observable, "ladder or escape (default: escape for quadratic_compatible, else ladder)");
    sub->add_option("--n", o.n, "orbit length")->check(CLI::PositiveNumber);
    sub->add_option("--ell", o.ell, "number of orbits")->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "master seed");
    sub->add_option("--burnin", o.burnin, "iterations discarded before recording (default depends on the map)");
    sub->add_option("--cap", o.cap, "level reported for points on the Cantor set")->check(CLI::PositiveNumber);
}

SimulationConfig simulation_config(const SimulateOptions& o, const Globals& g)
{
    SimulationConfig c;
    c.observable = pick_observable(o.observable, o.map);
    c.n = o.n;
    c.ell = o.ell;
    c.seed = o.seed;
    c.burnin = o.burnin >= 0 ? o.burnin : default_burnin(o.map);
    c.cap = o.cap;
    c.threads = g.threads;
    return c;
}

void run_simulate(const SimulateOptions& o, Context& ctx)
{
    Stopwatch clock;
    const PiecewiseMap map = resolve_float_map(o.map);
    const SimulationConfig c = simulation_config(o, ctx.globals);
    if (!o.dump_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(o.dump_dir, ec);
        if (ec) throw io_error("cannot create dump directory '" + o.dump_dir + "': " + ec.message());
    }
    const auto x0 = sample_initial_points(c.ell, c.seed);
    struct Summary {
        int max_level = 0;
        std::size_t cap_hits = 0;
    };
    std::vector<Summary> summary(c.ell);
    parallel_for(c.ell, c.threads, [&](std::size_t i) {
        auto s = generate_series(map, c.observable, c.n, x0[i], c.cap, c.burnin);
        summary[i].max_level = *std::max_element(s.levels.begin(), s.levels.end());
        summary[i].cap_hits = static_cast<std::size_t>(std::count(s.levels.begin(), s.levels.end(), c.cap));
        if (!o.dump_dir.empty()) {
            char name[32];
            std::snprintf(name, sizeof name, "orbit_%06zu.txt", i);
            std::ofstream f(std::filesystem::path(o.dump_dir) / name);
            for (int level : s.levels) f << level << '\n';
            if (!f) throw io_error("cannot write series to '" + o.dump_dir + "'");
        }
    });
    write_header(ctx.out, {"simulate", ctx.canonical, std::to_string(c.seed),
                           {"observable: " + to_string(c.observable), "burnin: " + std::to_string(c.burnin)}});
    ctx.out << "orbit,x0,max_level,cap_hits\n";
    for (std::size_t i = 0; i < c.ell; ++i)
        ctx.out << i << ',' << format_real(x0[i]) << ',' << summary[i].max_level << ',' << summary[i].cap_hits << '\n';
    ctx.log("simulate " + map.id() + ": " + std::to_string(c.ell) + " orbits in " + format_real(clock.seconds()) + " s");
}

// ---------------------------------------------------------------- sweep

struct SweepOptions {
    SimulateOptions sim;
    int u_min = 1;
    int u_max = 20;
    std::vector<int> q_list{1, 5, 10};
    int plateau_window = 3;
    double plateau_eps = 0.02;
};

void add_grid_options(CLI::App* sub, SweepOptions& o)
{
    sub->add_option("--u-min", o.u_min, "smallest threshold")->check(CLI::PositiveNumber);
    sub->add_option("--u-max", o.u_max, "largest threshold")->check(CLI::PositiveNumber);
    sub->add_option("--q", o.q_list, "gap lengths, comma separated")->delimiter(',');
    sub->add_option("--plateau-window", o.plateau_window, "u values per stability window")->check(CLI::Range(2, 1000));
    sub->add_option("--plateau-eps", o.plateau_eps, "largest spread of means inside a stable window");
}

std::vector<std::string> plateau_notes(const SweepTable& t, const SweepOptions& o)
{
    std::vector<std::string> notes;
    for (const auto& p : stability_region(t, o.plateau_window, o.plateau_eps))
        notes.push_back("plateau " + t.meta.map_id + " u=" + std::to_string(p.u_lo) + ".." + std::to_string(p.u_hi) +
                        " value=" + format_real(p.value));
    return notes;
}

SweepTable run_one_sweep(const SweepOptions& o, Context& ctx)
{
    Stopwatch clock;
    const PiecewiseMap map = resolve_float_map(o.sim.map);
    const SimulationConfig c = simulation_config(o.sim, ctx.globals);
    SweepGrid grid{o.u_min, o.u_max, o.q_list};
    SweepTable t = simulate_sweep(map, c, grid);
    ctx.log("sweep " + map.id() + ": " + std::to_string(c.ell) + " orbits of length " + std::to_string(c.n) + " in " +
            format_real(clock.seconds()) + " s");
    return t;
}

void run_sweep(const SweepOptions& o, Context& ctx)
{
    SweepTable t = run_one_sweep(o, ctx);
    std::vector<std::string> notes{"burnin: " + std::to_string(t.meta.burnin),
                                   "estimates without exceedances are left out of the means and sd"};
    auto p = plateau_notes(t, o);
    notes.insert(notes.end(), p.begin(), p.end());
    write_header(ctx.out, {"sweep", ctx.canonical, std::to_string(t.meta.seed), notes});
    write_sweep_csv(ctx.out, t);
}

// ---------------------------------------------------------------- repro

struct ReproOptions {
    std::string figure;
    std::string panel = "left";
    double scale = 1.0;
    std::size_t n = 0;
    std::size_t ell = 0;
    std::uint64_t seed = 1;
    int cap = 100;
    std::vector<int> q_list{1, 5, 10};
    int plateau_window = 3;
    double plateau_eps = 0.02;
};

struct ReproRun {
    std::string map;
    std::string observable;
    int u_min;
    int u_max;
};

std::vector<ReproRun> repro_preset(const std::string& figure)
{
    if (figure == "fig3") return {{"mx_mod1:3", "ladder", 1, 20}, {"mx_mod1:9", "ladder", 1, 20}};
    if (figure == "fig4") return {{"mx_mod1:5", "ladder", 5, 28}};
    if (figure == "fig7") return {{"mixed_linear", "ladder", 1, 20}};
    if (figure == "fig8") return {{"nonlinear", "ladder", 5, 20}, {"gauss", "ladder", 5, 20}, {"rotation", "ladder", 5, 20}};
    if (figure == "fig9") return {{"quadratic_compatible", "escape", 5, 20}, {"mx_mod1:5", "escape", 5, 20}};
    throw config_error("unknown figure '" + figure + "' (expected fig3, fig4, fig7, fig8 or fig9)");
}

void run_repro(const ReproOptions& o, Context& ctx)
{
    const auto runs = repro_preset(o.figure);
    if (o.panel != "left" && o.panel != "right") throw config_error("--panel must be left or right");
    if (o.panel == "right" && o.figure != "fig4" && o.figure != "fig7")
        throw config_error("only fig4 and fig7 have a right panel");
    if (!(o.scale > 0)) throw config_error("--scale must be positive");
    std::size_t n = o.panel == "right" ? 500'000 : 50'000;
    std::size_t ell = o.panel == "right" ? 100 : 500;
    auto scaled = [&](std::size_t v) {
        return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(static_cast<double>(v) * o.scale)));
    };
    n = o.n ? o.n : scaled(n);
    ell = o.ell ? o.ell : scaled(ell);

    std::vector<SweepTable> tables;
    std::vector<std::string> notes{"n: " + std::to_string(n), "ell: " + std::to_string(ell),
                                   "estimates without exceedances are left out of the means and sd"};
    for (const auto& r : runs) {
        SweepOptions s;
        s.sim.map = r.map;
        s.sim.observable = r.observable;
        s.sim.n = n;
        s.sim.ell = ell;
        s.sim.seed = o.seed;
        s.sim.cap = o.cap;
        s.u_min = r.u_min;
        s.u_max = r.u_max;
        s.q_list = o.q_list;
        s.plateau_window = o.plateau_window;
        s.plateau_eps = o.plateau_eps;
        tables.push_back(run_one_sweep(s, ctx));
        notes.push_back("burnin " + r.map + ": " + std::to_string(tables.back().meta.burnin));
        auto p = plateau_notes(tables.back(), s);
        notes.insert(notes.end(), p.begin(), p.end());
    }
    write_header(ctx.out, {"repro " + o.figure, ctx.canonical, std::to_string(o.seed), notes});
    for (std::size_t i = 0; i < tables.size(); ++i) write_sweep_csv(ctx.out, tables[i], i == 0);
}

// ---------------------------------------------------------------- theta-exact

struct ThetaOptions {
    std::string map = "mx_mod1:3";
    int level = 1;
    int level_max = 0;
    std::string gaps = "auto";
    bool csv = false;
    std::string dump_set;
};

void run_theta_exact(const ThetaOptions& o, Context& ctx)
{
    Stopwatch clock;
    const ExactContext ec = ctx.exact();
    const ExactTarget target = resolve_exact_map(o.map);
    const int last = o.level_max > 0 ? o.level_max : o.level;
    if (last < o.level) throw config_error("--level-max must be >= --level");
    std::optional<int> fixed_q;
    if (o.gaps != "auto") {
        try {
            std::size_t used = 0;
            fixed_q = std::stoi(o.gaps, &used);
            if (used != o.gaps.size() || *fixed_q < 0) throw std::invalid_argument("gaps");
        } catch (const std::logic_error&) {
            throw config_error("--gaps must be a nonnegative integer or 'auto'");
        }
    }

    std::vector<TheoryResult> rows;
    IntervalSet last_a;
    for (int level = o.level; level <= last; ++level) {
        const int q = fixed_q ? *fixed_q : auto_gaps(o.map, level);
        IntervalSet u = target.ifs ? survivor_approx(*target.ifs, level, ec) : cantor_approx(level, ec);
        rows.push_back(obrien_theta(target.map, u, level, q, ec));
        if (level == last && !o.dump_set.empty()) last_a = cluster_terminating_set(target.map, u, q, ec);
    }
    if (!o.dump_set.empty()) {
        std::ofstream f(o.dump_set);
        write_text(f, last_a);
        if (!f) throw io_error("cannot write '" + o.dump_set + "'");
    }

    std::vector<std::string> notes;
    std::optional<Rational> limit;
    try {
        limit = target.ifs ? general_theta_limit(*target.ifs, 1) : theoretical_ei(o.map);
    } catch (const no_closed_form_error&) {
    }
    if (limit) notes.push_back("ei_limit: " + to_string(*limit));
    write_header(ctx.out, {"theta-exact", ctx.canonical, "", notes});
    if (o.csv || rows.size() > 1) {
        write_theory_csv(ctx.out, rows);
    } else {
        const auto& r = rows.front();
        ctx.out << "map " << r.map_id << '\n'
                << "level " << r.level << '\n'
                << "q " << r.q << '\n'
                << "mu_U " << to_string(r.mu_u) << '\n'
                << "mu_A " << to_string(r.mu_a) << '\n'
                << "theta " << to_string(r.theta) << '\n'
                << "theta_decimal " << format_real(to_double(r.theta)) << '\n';
        if (limit) ctx.out << "ei_limit " << to_string(*limit) << '\n';
    }
    ctx.log("theta-exact " + o.map + ": " + std::to_string(rows.size()) + " level(s) in " + format_real(clock.seconds()) +
            " s");
}

// ---------------------------------------------------------------- digraph

struct DigraphOptions {
    int m = 2;
    int q = 1;
    bool dump_matrix = false;
    long long k = -1;
    int depth = 8;
    double tol = 1e-10;
    int max_iterations = 100000;
};

void run_digraph(const DigraphOptions& o, Context& ctx)
{
    const SubstitutionMatrix n = build_nq(o.m, o.q, ctx.globals.max_matrix_dim);
    const double rho = spectral_radius(n, o.tol, o.max_iterations);
    write_header(ctx.out, {"digraph", ctx.canonical, "", {}});
    ctx.out << "m " << o.m << '\n' << "q " << o.q << '\n' << "dim " << n.dim() << '\n' << "nnz " << n.nnz() << '\n';
    ctx.out << "zero_one " << (n.is_zero_one() ? "true" : "false") << '\n';
    ctx.out << "row_sums";
    for (const auto& [sum, count] : n.row_sum_histogram()) ctx.out << ' ' << sum << ':' << count;
    ctx.out << '\n';
    ctx.out << "rho " << format_real(rho) << '\n';
    ctx.out << "dim_bound " << format_real(dim_bound(o.m, o.q, o.tol)) << '\n';
    if (o.k >= 0) {
        const DigraphIFS g = mcclure_digraph(o.m, o.q, o.k, o.depth, ctx.exact());
        const SubstitutionMatrix mk = build_mqk(g.vertices, o.m, o.q);
        std::vector<std::size_t> idx;
        for (const auto& v : g.vertices) idx.push_back(static_cast<std::size_t>(v.offset + 1));
        ctx.out << "k " << o.k << '\n' << "depth " << o.depth << '\n' << "vertices";
        for (const auto& v : g.vertices) ctx.out << ' ' << v.offset;
        ctx.out << '\n';
        ctx.out << "edges " << g.edges.size() << '\n';
        ctx.out << "rho_mk " << format_real(g.vertices.empty() ? 0.0 : spectral_radius(mk, o.tol, o.max_iterations)) << '\n';
        ctx.out << "principal_submatrix " << (mk.entries() == n.principal_submatrix(idx).entries() ? "true" : "false")
                << '\n';
    }
    if (o.dump_matrix)
        for (const auto& e : n.entries()) ctx.out << e.row + 1 << ' ' << e.col + 1 << '\n';
}

// ---------------------------------------------------------------- ifs-theta

struct IfsOptions {
    std::string spec;
    int k = 1;
    int n = 6;
    bool check_identity = false;
};

void run_ifs_theta(const IfsOptions& o, Context& ctx)
{
    const ExactContext ec = ctx.exact();
    const AffineIFS ifs = o.spec.empty() ? AffineIFS::ternary() : load_ifs(o.spec);
    std::optional<AffineMap> fk;
    if (o.check_identity) fk = compatible_map(ifs).iterate(o.k, ec);
    write_header(ctx.out, {"ifs-theta", ctx.canonical, "",
                           {"limit: " + to_string(general_theta_limit(ifs, o.k)),
                            "similarity_dimension: " + format_real(similarity_dimension(ifs))}});
    ctx.out << "n,k,theta,theta_decimal";
    if (fk) ctx.out << ",obrien_theta,identity";
    ctx.out << '\n';
    for (int n = 1; n <= o.n; ++n) {
        Rational theta = general_theta(ifs, o.k, n, ec);
        ctx.out << n << ',' << o.k << ',' << to_string(theta) << ',' << format_real(to_double(theta));
        if (fk) {
            const int level = n + o.k - 1;
            IntervalSet outer = survivor_approx(ifs, level, ec);
            IntervalSet a = cluster_terminating_set(*fk, outer, level / o.k, ec);
            IntervalSet d = subtract(outer, survivor_approx(ifs, n + 2 * o.k - 1, ec), ec);
            ctx.out << ',' << to_string(measure(a) / measure(outer)) << ',' << (a == d ? "true" : "false");
        }
        ctx.out << '\n';
    }
}

// ---------------------------------------------------------------- counts

struct CountsOptions {
    int m = 2;
    int q = 1;
    int n_max = 6;
    int depth_extra = 4;
};

void run_counts(const CountsOptions& o, Context& ctx)
{
    const ExactContext ec = ctx.exact();
    std::vector<std::pair<int, long long>> star, refined;
    std::ostringstream body;
    body << "n,n_star,n_refined,depth\n";
    for (int n = 1; n <= o.n_max; ++n) {
        CoveringCounts c = covering_counts(o.m, o.q, n, n + o.depth_extra, ec);
        star.emplace_back(n, c.n_star);
        refined.emplace_back(n, c.n_refined);
        body << n << ',' << c.n_star << ',' << c.n_refined << ',' << c.depth << '\n';
    }
    std::vector<std::string> notes;
    if (star.size() >= 2) {
        notes.push_back("dim_estimate_star: " + format_real(dim_estimate_from_counts(star)));
        notes.push_back("dim_estimate_refined: " + format_real(dim_estimate_from_counts(refined)));
    }
    write_header(ctx.out, {"counts", ctx.canonical, "", notes});
    ctx.out << body.str();
}

} // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err)
{
    std::vector<std::string> args;
    try {
        args = merge_config_file(raw_args);
    } catch (const io_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::io;
    } catch (const error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::config;
    }

    Globals g;
    CLI::App app{"Extremal index of orbits hitting Cantor sets: exact ratios, digraph bounds, Monte-Carlo sweeps",
                 "cantor-ei"};
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", version);
    app.add_option("--config", g.config, "flat key=value file; flags override it");
    app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_flag("--quiet", g.quiet, "no progress messages on stderr");
    app.add_option("-o,--output", g.output, "write results to this file instead of stdout");
    app.add_option("--max-depth", g.max_depth, "largest Cantor level for exact sets")->check(CLI::NonNegativeNumber);
    app.add_option("--max-denominator-bits", g.max_denominator_bits, "largest endpoint denominator, in bits");
    app.add_option("--max-matrix-dim", g.max_matrix_dim, "largest substitution matrix dimension");
    app.add_option("--max-operations", g.max_operations, "budget for exact set operations (0 = unlimited)");

    SimulateOptions sim;
    auto* simulate = app.add_subcommand("simulate", "generate orbit ensembles and summarise or dump the series");
    add_simulation_options(simulate, sim);
    simulate->add_option("--dump-dir", sim.dump_dir, "write one file per orbit, one level per line");

    SweepOptions sw;
    auto* sweep_cmd = app.add_subcommand("sweep", "mean Hsing estimates over a (u, q) grid");
    add_simulation_options(sweep_cmd, sw.sim);
    add_grid_options(sweep_cmd, sw);

    ReproOptions rp;
    auto* repro = app.add_subcommand("repro", "regenerate the data of one simulation figure");
    repro->add_option("figure", rp.figure, "fig3, fig4, fig7, fig8 or fig9")->required();
    repro->add_option("--panel", rp.panel, "left or right (fig4 and fig7)");
    repro->add_option("--scale", rp.scale, "multiplier applied to the preset n and ell");
    repro->add_option("--n", rp.n, "orbit length (overrides the preset)");
    repro->add_option("--ell", rp.ell, "number of orbits (overrides the preset)");
    repro->add_option("--seed", rp.seed, "master seed");
    repro->add_option("--cap", rp.cap, "level reported for points on the Cantor set")->check(CLI::PositiveNumber);
    repro->add_option("--q", rp.q_list, "gap lengths, comma separated")->delimiter(',');
    repro->add_option("--plateau-window", rp.plateau_window)->check(CLI::Range(2, 1000));
    repro->add_option("--plateau-eps", rp.plateau_eps);

    ThetaOptions th;
    auto* theta = app.add_subcommand("theta-exact", "exact O'Brien ratio mu(A_q) / mu(U) at threshold level L");
    theta->add_option("--map", th.map, "mx_mod1:M, mixed_linear or ifs:FILE");
    theta->add_option("--level", th.level, "threshold level L (U = C_L)")->check(CLI::NonNegativeNumber);
    theta->add_option("--level-max", th.level_max, "last level of a range starting at --level");
    theta->add_option("--gaps", th.gaps, "q, or 'auto' for the schedule of the map");
    theta->add_flag("--csv", th.csv, "CSV output");
    theta->add_option("--dump-set", th.dump_set, "write A_q at the last level to this file");

    DigraphOptions dg;
    auto* digraph = app.add_subcommand("digraph", "substitution matrix N^q, spectral radius and dimension bound");
    digraph->add_option("--m", dg.m)->check(CLI::Range(2, 1 << 20));
    digraph->add_option("--q", dg.q)->check(CLI::PositiveNumber);
    digraph->add_flag("--dump-matrix", dg.dump_matrix, "print the nonzero entries as 1-based 'row col' lines");
    digraph->add_option("--k", dg.k, "also build the per-offset digraph seeded at x/m^q + k/m^q");
    digraph->add_option("--depth", dg.depth, "Cantor level of the vertex filter")->check(CLI::PositiveNumber);
    digraph->add_option("--tol", dg.tol, "relative tolerance of the spectral radius");
    digraph->add_option("--max-iterations", dg.max_iterations, "power-iteration budget")->check(CLI::PositiveNumber);

    IfsOptions fs;
    auto* ifs_cmd = app.add_subcommand("ifs-theta", "finite-n ratios mu(L_{n+k-1} \\ L_{n+2k-1}) / mu(L_{n+k-1})");
    ifs_cmd->add_option("--spec", fs.spec, "IFS file, one 'ratio offset' per line (default: ternary Cantor set)");
    ifs_cmd->add_option("--k", fs.k)->check(CLI::PositiveNumber);
    ifs_cmd->add_option("--n", fs.n, "largest n")->check(CLI::PositiveNumber);
    ifs_cmd->add_flag("--check-identity", fs.check_identity, "compare with A_q of the k-th iterate of the compatible map");

    CountsOptions ct;
    auto* counts = app.add_subcommand("counts", "covering counts of C_n ∩ T^-q(C_n) for T = m x mod 1");
    counts->add_option("--m", ct.m)->check(CLI::Range(2, 1 << 20));
    counts->add_option("--q", ct.q)->check(CLI::NonNegativeNumber);
    counts->add_option("--n-max", ct.n_max)->check(CLI::PositiveNumber);
    counts->add_option("--depth-extra", ct.depth_extra, "refinement depth d = n + depth_extra")
        ->check(CLI::NonNegativeNumber);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? exit_code::ok : exit_code::config;
    }

    CLI::App* chosen = app.get_subcommands().front();
    std::ostringstream buffer;
    Context ctx{g, canonical_config(app, *chosen), g.output.empty() ? out : buffer, err, nullptr};
    if (g.max_operations > 0) ctx.budget = std::make_unique<OperationBudget>(g.max_operations);

    try {
        if (chosen == simulate)
            run_simulate(sim, ctx);
        else if (chosen == sweep_cmd)
            run_sweep(sw, ctx);
        else if (chosen == repro)
            run_repro(rp, ctx);
        else if (chosen == theta)
            run_theta_exact(th, ctx);
        else if (chosen == digraph)
            run_digraph(dg, ctx);
        else if (chosen == ifs_cmd)
            run_ifs_theta(fs, ctx);
        else
            run_counts(ct, ctx);
        if (!g.output.empty()) {
            std::ofstream f(g.output, std::ios::binary);
            f << buffer.str();
            f.close();
            if (!f) throw io_error("cannot write output file '" + g.output + "'");
        }
    } catch (const resource_limit_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::resource;
    } catch (const convergence_error& e) {
        err << "error: " << e.what() << " (last " << format_real(e.last()) << ", previous " << format_real(e.previous())
            << ")\n";
        return exit_code::nonconvergence;
    } catch (const io_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::io;
    } catch (const error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::config;
    } catch (const std::bad_alloc&) {
        err << "error: out of memory\n";
        return exit_code::resource;
    }
    return exit_code::ok;
}

} // namespace cantor_ei::cli
