#include "ixt/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ixt/errors.hpp"
#include "ixt/golden.hpp"
#include "ixt/kernel.hpp"
#include "ixt/parallel.hpp"
#include "ixt/transforms.hpp"
#include "ixt/verify.hpp"
#include "ixt/wedge.hpp"

#ifndef IXT_DEFAULT_GOLDEN
#define IXT_DEFAULT_GOLDEN "tests/data/golden.json"
#endif

namespace ixt::cli {
namespace {

using nlohmann::json;
namespace tr = ixt::transforms;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw DomainError("--" + key + ": not a number: '" + text + "'");
    }
}

std::vector<std::string> split(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) parts.push_back(item);
    }
    return parts;
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
    std::vector<double> v;
    for (const auto& p : split(text)) v.push_back(to_double(key, p));
    if (v.empty()) throw DomainError("--" + key + ": empty list");
    return v;
}

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// A table cell: a number, an empty slot, or text.
struct Cell {
    enum Kind { number, empty, text } kind = empty;
    double value = 0.0;
    std::string str;

    static Cell of(double v) { return {number, v, {}}; }
    static Cell none() { return {}; }
    static Cell of(std::string s) { return {text, 0.0, std::move(s)}; }
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    json extra = json::object();
};

std::string csv_field(const Cell& c) {
    switch (c.kind) {
        case Cell::number: return num(c.value);
        case Cell::empty: return "";
        case Cell::text: break;
    }
    if (c.str.find_first_of(",\"\n") == std::string::npos) return c.str;
    std::string q = "\"";
    for (char ch : c.str) q += (ch == '"') ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
}

json json_field(const Cell& c) {
    switch (c.kind) {
        case Cell::number: return std::isfinite(c.value) ? json(c.value) : json(nullptr);
        case Cell::empty: return nullptr;
        case Cell::text: return c.str;
    }
    return nullptr;
}

std::string render(const Table& t, Format format) {
    std::ostringstream os;
    if (format == Format::csv) {
        for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
        os << "\n";
        for (const auto& row : t.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
            os << "\n";
        }
        return os.str();
    }
    json doc = t.extra;
    doc["rows"] = json::array();
    for (const auto& row : t.rows) {
        json r = json::object();
        for (std::size_t i = 0; i < row.size(); ++i) r[t.columns[i]] = json_field(row[i]);
        doc["rows"].push_back(r);
    }
    return doc.dump(2) + "\n";
}

void emit(const RunConfig& config, const Table& table, std::ostream& out) {
    const std::string text = render(table, config.format);
    if (config.out.empty()) {
        out << text;
        return;
    }
    std::ofstream file(config.out, std::ios::binary);
    if (!file) throw IoError("cannot open output file " + config.out);
    file << text;
    if (!file) throw IoError("write failed: " + config.out);
}

quad::ContourSpec contour_of(const RunConfig& c) {
    quad::ContourSpec s;
    s.gamma = c.gamma;
    s.height = c.height;
    s.nodes_per_unit = c.nodes_per_unit;
    s.validate();
    return s;
}

quad::QuadratureSpec quadrature_of(const RunConfig& c) {
    quad::QuadratureSpec s;
    s.rel_tol = c.rel_tol;
    s.abs_tol = c.abs_tol;
    s.validate();
    return s;
}

void require(const std::vector<double>& v, const char* flag) {
    if (v.empty()) throw DomainError(std::string("missing --") + flag);
}

double rel_spread(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

int cmd_kernel(const RunConfig& c, std::ostream& out, std::ostream& err) {
    require(c.taus, "tau");
    require(c.xs, "x");
    const auto contour = contour_of(c);
    const auto spec = quadrature_of(c);
    const bool all = c.route == "all";
    const bool automatic = c.route == "auto";
    const kernel::Route single =
        (all || automatic) ? kernel::Route::direct : kernel::parse_route(c.route);
    const double tol = c.tol > 0.0 ? c.tol : 1e-6;

    struct Point {
        double tau, x;
    };
    std::vector<Point> points;
    for (double t : c.taus)
        for (double x : c.xs) points.push_back({t, x});

    using Rows = std::vector<std::vector<Cell>>;
    auto evaluate = [&](std::size_t i) -> Rows {
        const auto [tau, x] = points[i];
        auto row = [&](std::string_view route, const EvalResult& r) {
            return std::vector<Cell>{Cell::of(tau), Cell::of(x), Cell::of(std::string(route)),
                                     Cell::of(r.value), Cell::of(r.err_est)};
        };
        if (automatic) return {row("auto", kernel::psi_auto(tau, x))};
        auto run_route = [&](kernel::Route r) -> EvalResult {
            switch (r) {
                case kernel::Route::direct: return kernel::psi_direct(tau, x);
                case kernel::Route::fourier: return kernel::psi_fourier(tau, x, spec);
                case kernel::Route::mellin_barnes: return kernel::psi_mellin_barnes(tau, x, contour, spec);
            }
            return {};
        };
        if (!all) return {row(kernel::route_name(single), run_route(single))};
        Rows rows;
        for (auto r : {kernel::Route::direct, kernel::Route::fourier, kernel::Route::mellin_barnes}) {
            // The direct route is undefined below tau_min; the other two cover it.
            if (r == kernel::Route::direct && std::abs(tau) < kernel::kTauMin) continue;
            rows.push_back(row(kernel::route_name(r), run_route(r)));
        }
        return rows;
    };
    const auto results = parallel_map(points.size(), c.jobs, evaluate);

    Table table;
    table.columns = {"tau", "x", "route", "value", "err_est"};
    double worst = 0.0;
    for (const auto& rows : results) {
        for (const auto& r : rows) table.rows.push_back(r);
        for (std::size_t i = 1; i < rows.size(); ++i)
            worst = std::max(worst, rel_spread(rows[0][3].value, rows[i][3].value));
    }
    if (all) {
        table.extra["max_relative_spread"] = worst;
        table.extra["tolerance"] = tol;
    }
    emit(c, table, out);
    if (all && worst > tol) {
        err << "route disagreement: max relative spread " << num(worst) << " > " << num(tol) << "\n";
        return kTolerance;
    }
    return kOk;
}

tr::SampledFunction canonical_function(const std::string& name, bool index_side) {
    const std::string n = name.empty() ? (index_side ? "gaussian_index" : "zero_mean") : name;
    if (!index_side && n == "zero_mean") return tr::canonical::zero_mean();
    if (!index_side && n == "two_exponentials") return tr::canonical::two_exponentials();
    if (index_side && n == "gaussian_index") return tr::canonical::gaussian_index();
    if (index_side && n == "slow_index") return tr::canonical::slow_index();
    throw DomainError("--function: unknown function '" + n + "' for this transform");
}

int cmd_transform(const RunConfig& c, std::ostream& out, std::ostream&) {
    const auto contour = contour_of(c);
    const auto spec = quadrature_of(c);
    const std::string& kind = c.kind;
    const bool forward = kind == "F" || kind == "F-mellin" || kind == "F-composition";
    const bool adjoint = kind == "G" || kind == "G-fourier";
    if (!forward && !adjoint)
        throw DomainError("--kind must be F, F-mellin, F-composition, G or G-fourier");
    const auto fn = canonical_function(c.function, adjoint);
    const auto& nodes = forward ? c.taus : c.xs;
    require(nodes, forward ? "tau" : "x");

    std::function<EvalResult(double)> eval;
    if (kind == "F") {
        eval = [&](double t) { return tr::forward_F(fn, t, spec); };
    } else if (kind == "F-mellin") {
        const auto fstar = (c.function == "two_exponentials") ? tr::canonical::two_exponentials_mellin
                                                               : tr::canonical::zero_mean_mellin;
        eval = [&, fstar](double t) { return tr::forward_F_mellin(fstar, t, contour, spec); };
    } else if (kind == "F-composition") {
        eval = [&](double t) { return tr::forward_F_composition(fn, t); };
    } else if (kind == "G") {
        eval = [&](double x) { return tr::adjoint_G(fn, x, spec); };
    } else {
        eval = [&](double x) { return tr::adjoint_G_fourier_route(fn, x); };
    }
    const auto result = tr::evaluate_grid(nodes, c.jobs, kind, eval);

    Table table;
    table.columns = {"tau", "x", "route", "value", "err_est"};
    for (const auto& node : result.grid) {
        const Cell at = Cell::of(node.abscissa);
        table.rows.push_back({forward ? at : Cell::none(), forward ? Cell::none() : at,
                              Cell::of(result.route), Cell::of(node.value), Cell::of(node.err_est)});
    }
    emit(c, table, out);
    return kOk;
}

int cmd_invert(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const std::string mode = c.mode.empty() ? "roundtrip-F" : c.mode;
    if (mode != "roundtrip-F" && mode != "roundtrip-G")
        throw DomainError("--mode must be roundtrip-F or roundtrip-G");
    const auto nodes = c.xs.empty() ? std::vector<double>{0.5, 1.0, 2.0} : c.xs;
    const auto rt = mode == "roundtrip-F" ? verify::roundtrip_F(nodes) : verify::roundtrip_G(nodes);
    const double tol = c.tol > 0.0 ? c.tol : 1e-3;

    Table table;
    table.columns = {"tau", "x", "route", "value", "err_est"};
    for (const auto& r : rt.rows)
        table.rows.push_back({Cell::none(), Cell::of(r.x), Cell::of(mode), Cell::of(r.recovered),
                              Cell::of(r.err_est)});
    json expected = json::array();
    for (const auto& r : rt.rows) expected.push_back(r.expected);
    table.extra["expected"] = expected;
    table.extra["max_rel_error"] = rt.max_rel_error;
    table.extra["tolerance"] = tol;
    if (mode == "roundtrip-F") table.extra["max_tail_mass"] = rt.max_tail_mass;
    emit(c, table, out);
    err << "max_rel_error=" << num(rt.max_rel_error) << "\n";
    return rt.max_rel_error <= tol ? kOk : kTolerance;
}

int cmd_pde(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const wedge::WedgeParams params{c.beta, canonical_function(c.function, true)};
    params.validate();
    const auto rs = c.rs.empty() ? std::vector<double>{0.5, 1.0, 2.0} : c.rs;
    const auto thetas = c.thetas.empty() ? std::vector<double>{0.1, 0.3, 0.6} : c.thetas;
    const std::string mode = c.mode.empty() ? "semi-analytic" : c.mode;
    if (mode != "semi-analytic" && mode != "finite-difference")
        throw DomainError("--mode must be semi-analytic or finite-difference");
    const auto rmode = mode == "semi-analytic" ? wedge::ResidualMode::semi_analytic
                                               : wedge::ResidualMode::finite_difference;
    const double tol = c.tol > 0.0 ? c.tol : 1e-4;

    std::vector<wedge::PolarPoint> pts;
    for (double r : rs)
        for (double th : thetas) pts.push_back({r, th});
    struct Out {
        EvalResult u;
        double residual;
    };
    const auto results = parallel_map(pts.size(), c.jobs, [&](std::size_t i) {
        return Out{wedge::wedge_u(params, pts[i]), wedge::pde_residual(params, pts[i], c.h, rmode).residual};
    });
    Table table;
    table.columns = {"r", "theta", "value", "err_est", "residual"};
    double worst = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        table.rows.push_back({Cell::of(pts[i].r), Cell::of(pts[i].theta), Cell::of(results[i].u.value),
                              Cell::of(results[i].u.err_est), Cell::of(results[i].residual)});
        worst = std::max(worst, results[i].residual);
    }
    table.extra["max_residual"] = worst;
    table.extra["tolerance"] = tol;
    emit(c, table, out);
    if (worst > tol) {
        err << "pde residual " << num(worst) << " > " << num(tol) << "\n";
        return kTolerance;
    }
    return kOk;
}

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
    verify::SuiteOptions opts;
    opts.golden_path = c.golden.empty() ? IXT_DEFAULT_GOLDEN : c.golden;
    opts.seed = c.seed;
    opts.jobs = c.jobs;
    // Fail on a missing golden file before spending time on the suite.
    golden::load(opts.golden_path);
    const auto results = verify::run_suite(opts, c.only);
    Table table;
    table.columns = {"check", "status", "metric", "threshold", "detail"};
    bool ok = true;
    for (const auto& r : results) {
        table.rows.push_back({Cell::of(r.name), Cell::of(std::string(r.pass ? "PASS" : "FAIL")),
                              Cell::of(r.metric), Cell::of(r.threshold), Cell::of(r.detail)});
        ok = ok && r.pass;
    }
    table.extra["passed"] = ok;
    emit(c, table, out);
    if (!ok) {
        for (const auto& r : results)
            if (!r.pass) err << "FAIL " << r.name << ": " << r.detail << "\n";
        return kTolerance;
    }
    return kOk;
}

int cmd_golden_check(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const auto file = golden::load(c.golden.empty() ? IXT_DEFAULT_GOLDEN : c.golden);
    const auto checks = golden::check(file);
    Table table;
    table.columns = {"op", "inputs", "expected", "computed", "abs_error", "tolerance", "status"};
    bool ok = true;
    for (const auto& ch : checks) {
        std::string inputs;
        for (const auto& [k, v] : ch.entry.inputs) inputs += (inputs.empty() ? "" : ";") + k + "=" + v;
        const std::string status = ch.pass ? "PASS" : (ch.error.empty() ? "FAIL" : "ERROR: " + ch.error);
        table.rows.push_back({Cell::of(ch.entry.op), Cell::of(inputs), Cell::of(ch.expected),
                              Cell::of(ch.computed), Cell::of(ch.abs_error), Cell::of(ch.tolerance),
                              Cell::of(status)});
        ok = ok && ch.pass;
    }
    table.extra["passed"] = ok;
    emit(c, table, out);
    if (!ok) {
        err << "golden entries out of tolerance\n";
        return kTolerance;
    }
    return kOk;
}

}  // namespace

void RunConfig::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw DomainError("tolerances must be > 0");
    if (!(tol >= 0.0)) throw DomainError("--tol must be > 0");
    if (jobs < 1) throw DomainError("--jobs must be >= 1");
    if (!(h > 0.0)) throw DomainError("--h must be > 0");
}

void apply_settings(RunConfig& c, const std::map<std::string, std::string>& settings) {
    for (const auto& [key, raw] : settings) {
        const std::string value = trim(raw);
        if (key == "rel_tol") c.rel_tol = to_double(key, value);
        else if (key == "abs_tol") c.abs_tol = to_double(key, value);
        else if (key == "tol") c.tol = to_double(key, value);
        else if (key == "gamma") c.gamma = to_double(key, value);
        else if (key == "height") c.height = to_double(key, value);
        else if (key == "nodes_per_unit") c.nodes_per_unit = to_double(key, value);
        else if (key == "format") {
            if (value == "csv") c.format = Format::csv;
            else if (value == "json") c.format = Format::json;
            else throw DomainError("--format must be csv or json");
        } else if (key == "out") c.out = value;
        else if (key == "golden") c.golden = value;
        else if (key == "jobs") {
            const double j = to_double(key, value);
            if (j != std::floor(j) || j < 1 || j > 1024) throw DomainError("--jobs must be an integer >= 1");
            c.jobs = static_cast<int>(j);
        } else if (key == "tau") c.taus = to_list(key, value);
        else if (key == "x") c.xs = to_list(key, value);
        else if (key == "route") c.route = value;
        else if (key == "kind") c.kind = value;
        else if (key == "function") c.function = value;
        else if (key == "mode") c.mode = value;
        else if (key == "r") c.rs = to_list(key, value);
        else if (key == "theta") c.thetas = to_list(key, value);
        else if (key == "beta") c.beta = to_double(key, value);
        else if (key == "h" || key == "fd_step") c.h = to_double(key, value);
        else if (key == "only") c.only = split(value);
        else if (key == "seed") {
            const double s = to_double(key, value);
            if (s < 0 || s != std::floor(s)) throw DomainError("--seed must be a non-negative integer");
            c.seed = static_cast<unsigned long long>(s);
        } else throw DomainError("unknown setting '" + key + "'");
    }
    c.validate();
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';' || line[0] == '[') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw DomainError("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        for (auto& ch : key)
            if (ch == '-') ch = '_';
        out[key] = trim(line.substr(eq + 1));
    }
    return out;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Index transforms with products of Bessel kernels", "ixt"};
    app.require_subcommand(1);

    std::map<std::string, std::string> flags;
    std::string config_path;
    // Every value flag is captured as text; the config file is applied first
    // and flags given on the command line override it.
    auto add = [&](CLI::App* sub, const std::string& name, const std::string& help) {
        sub->add_option_function<std::string>(
            "--" + name, [&flags, name](const std::string& v) { flags[name] = v; }, help);
    };
    auto common = [&](CLI::App* sub) {
        add(sub, "tol", "pass/fail tolerance of the subcommand");
        add(sub, "rel_tol", "quadrature relative tolerance");
        add(sub, "abs_tol", "quadrature absolute tolerance");
        add(sub, "gamma", "contour abscissa");
        add(sub, "height", "contour truncation height (0 = automatic)");
        add(sub, "nodes_per_unit", "contour level-0 node density");
        add(sub, "format", "csv or json");
        add(sub, "out", "output path (default stdout)");
        add(sub, "jobs", "worker threads");
        sub->add_option("--config", config_path, "INI-style settings file; flags win");
    };

    auto* kernel_cmd = app.add_subcommand("kernel", "tabulate Psi on a (tau, x) grid");
    common(kernel_cmd);
    add(kernel_cmd, "tau", "comma-separated tau values");
    add(kernel_cmd, "x", "comma-separated x values");
    add(kernel_cmd, "route", "direct, fourier, mellin_barnes, auto or all");

    auto* transform_cmd = app.add_subcommand("transform", "forward or adjoint transform of a canonical function");
    common(transform_cmd);
    add(transform_cmd, "kind", "F, F-mellin, F-composition, G or G-fourier");
    add(transform_cmd, "function", "zero_mean, two_exponentials, gaussian_index or slow_index");
    add(transform_cmd, "tau", "tau nodes (forward kinds)");
    add(transform_cmd, "x", "x nodes (adjoint kinds)");

    auto* invert_cmd = app.add_subcommand("invert", "inversion round trips");
    common(invert_cmd);
    add(invert_cmd, "mode", "roundtrip-F or roundtrip-G");
    add(invert_cmd, "x", "x nodes");

    auto* pde_cmd = app.add_subcommand("pde", "wedge solution and PDE residual");
    common(pde_cmd);
    add(pde_cmd, "r", "radii");
    add(pde_cmd, "theta", "angles");
    add(pde_cmd, "beta", "wedge opening");
    pde_cmd->add_option_function<std::string>(
        "--fd-step", [&flags](const std::string& v) { flags["h"] = v; }, "finite-difference spacing");
    add(pde_cmd, "mode", "semi-analytic or finite-difference");
    add(pde_cmd, "function", "gaussian_index or slow_index");

    auto* verify_cmd = app.add_subcommand("verify", "run the invariant suite and golden comparison");
    common(verify_cmd);
    add(verify_cmd, "golden", "golden file");
    add(verify_cmd, "only", "comma-separated subset of checks");
    add(verify_cmd, "seed", "RNG seed of the bound samples");

    auto* golden_cmd = app.add_subcommand("golden-check", "compare the library with a golden file");
    common(golden_cmd);
    add(golden_cmd, "golden", "golden file");

    std::vector<std::string> argv_store{"ixt"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kDomain;
    }

    try {
        RunConfig config;
        if (!config_path.empty()) apply_settings(config, read_config_file(config_path));
        apply_settings(config, flags);
        if (kernel_cmd->parsed()) return cmd_kernel(config, out, err);
        if (transform_cmd->parsed()) return cmd_transform(config, out, err);
        if (invert_cmd->parsed()) return cmd_invert(config, out, err);
        if (pde_cmd->parsed()) return cmd_pde(config, out, err);
        if (verify_cmd->parsed()) return cmd_verify(config, out, err);
        return cmd_golden_check(config, out, err);
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << "\n";
        return kIo;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << "\n";
        return kDomain;
    } catch (const DivergenceError& e) {
        err << "domain error: " << e.what() << "\n";
        return kDomain;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kTolerance;
    }
}

}  // namespace ixt::cli
