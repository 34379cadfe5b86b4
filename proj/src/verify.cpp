#include "ixt/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <mutex>
#include <random>

#include "ixt/errors.hpp"
#include "ixt/golden.hpp"
#include "ixt/kernel.hpp"
#include "ixt/parallel.hpp"
#include "ixt/transforms.hpp"
#include "ixt/wedge.hpp"

namespace ixt::verify {
namespace {

namespace tr = ixt::transforms;

const std::vector<double> kTaus = {0.5, 1.0, 2.0, 4.0};
const std::vector<double> kKernelX = {0.25, 1.0, 4.0};
const std::vector<double> kRoundTripNodes = {0.5, 1.0, 2.0};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

CheckResult make(std::string name, double metric, double threshold, std::string detail) {
    return {std::move(name), metric <= threshold, metric, threshold, std::move(detail)};
}

double rel(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

CheckResult kernel_routes_fourier(const SuiteOptions&) {
    double worst = 0.0, wt = 0.0, wx = 0.0;
    for (double t : kTaus)
        for (double x : kKernelX) {
            const double e = rel(kernel::psi_direct(t, x).value, kernel::psi_fourier(t, x).value);
            if (e >= worst) worst = e, wt = t, wx = x;
        }
    return make("kernel_routes_fourier", worst, 1e-8, fmt("worst at tau=%g x=%g", wt, wx));
}

CheckResult kernel_routes_mellin_barnes(const SuiteOptions&) {
    double worst = 0.0, wt = 0.0, wx = 0.0;
    for (double t : kTaus)
        for (double x : kKernelX) {
            const double d = kernel::psi_direct(t, x).value;
            const double f = kernel::psi_fourier(t, x).value;
            const double m = kernel::psi_mellin_barnes(t, x).value;
            const double e = std::max(rel(d, m), rel(f, m));
            if (e >= worst) worst = e, wt = t, wx = x;
        }
    return make("kernel_routes_mellin_barnes", worst, 1e-6, fmt("worst at tau=%g x=%g", wt, wx));
}

CheckResult golden_file(const SuiteOptions& opts) {
    const auto file = golden::load(opts.golden_path);
    const auto checks = golden::check(file);
    double worst = 0.0;
    int failed = 0;
    std::string first;
    for (const auto& c : checks) {
        const double ratio = c.error.empty() ? c.abs_error / c.tolerance
                                             : std::numeric_limits<double>::infinity();
        worst = std::max(worst, ratio);
        if (!c.pass && failed++ == 0) first = " first failure: " + c.entry.op;
    }
    return make("golden", worst, 1.0,
                std::to_string(checks.size()) + " entries, " + std::to_string(failed) +
                    " failed, metric = max abs error / tolerance" + first);
}

CheckResult bounds(const SuiteOptions& opts) {
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> tau_dist(-10.0, 10.0);
    std::uniform_real_distribution<double> logx_dist(std::log(1e-2), std::log(1e2));
    const double deltas[] = {0.0, 0.7, 1.2};
    int violations = 0;
    double worst_ratio = 0.0;
    for (int i = 0; i < opts.bound_samples; ++i) {
        const double tau = tau_dist(rng);
        const double x = std::exp(logx_dist(rng));
        for (double delta : deltas) {
            const auto rep = kernel::check_bound_delta(tau, x, delta);
            if (!rep.satisfied) ++violations;
            if (rep.rhs > 0.0) worst_ratio = std::max(worst_ratio, rep.lhs / rep.rhs);
        }
    }
    return make("bounds", violations, 0.0,
                std::to_string(opts.bound_samples) + " samples x 3 deltas, max lhs/rhs = " +
                    fmt("%.6g", worst_ratio));
}

CheckResult ode(const SuiteOptions&) {
    double worst = 0.0;
    for (double t : kTaus)
        for (double x : kKernelX) worst = std::max(worst, kernel::ode_residual(t, x));
    return make("ode", worst, 1e-8, "normalized residual, 12 points");
}

CheckResult index_identity(const SuiteOptions&) {
    double worst = 0.0;
    for (double x : {0.5, 1.0, 2.0})
        for (double u : {0.0, 0.5, 1.0}) {
            const auto rep = kernel::index_integral_check(x, u);
            worst = std::max(worst, std::abs(rep.lhs - rep.rhs));
        }
    return make("index_identity", worst, 1e-6, "max |lhs - rhs| over 9 points");
}

CheckResult forward_routes(const SuiteOptions&) {
    const auto f = tr::canonical::zero_mean();
    double worst = 0.0;
    for (double t : kTaus) {
        const double a = tr::forward_F(f, t).value;
        const double b = tr::forward_F_mellin(tr::canonical::zero_mean_mellin, t).value;
        const double c = tr::forward_F_composition(f, t).value;
        worst = std::max({worst, rel(a, b), rel(a, c), rel(b, c)});
    }
    return make("forward_routes", worst, 1e-6, "max pairwise relative difference");
}

CheckResult forward_sup_bound(const SuiteOptions&) {
    tr::BoundRequest req;
    req.selector = tr::BoundSelector::forward_sup;
    req.fn = tr::canonical::zero_mean();
    req.nodes = kTaus;
    int violations = 0;
    double ratio = 0.0;
    for (const auto& r : tr::bound_report(req)) {
        if (!r.satisfied) ++violations;
        ratio = std::max(ratio, r.lhs / r.rhs);
    }
    return make("forward_sup_bound", violations, 0.0, "max lhs/rhs = " + fmt("%.6g", ratio));
}

CheckResult adjoint_routes(const SuiteOptions&) {
    const auto g = tr::canonical::gaussian_index();
    double worst = 0.0;
    for (double x : {0.5, 1.0, 2.0, 4.0})
        worst = std::max(worst, rel(tr::adjoint_G(g, x).value,
                                    tr::adjoint_G_fourier_route(
                                        tr::canonical::gaussian_index_fourier, x).value));
    return make("adjoint_routes", worst, 1e-6, "max relative difference");
}

CheckResult adjoint_pointwise_bound(const SuiteOptions&) {
    tr::BoundRequest req;
    req.selector = tr::BoundSelector::adjoint_pointwise;
    req.fn = tr::canonical::gaussian_index();
    req.params.p = 2.0;
    req.nodes = {0.5, 1.0, 2.0, 4.0};
    int violations = 0;
    double ratio = 0.0;
    for (const auto& r : tr::bound_report(req)) {
        if (!r.satisfied) ++violations;
        ratio = std::max(ratio, r.lhs / r.rhs);
    }
    return make("adjoint_pointwise_bound", violations, 0.0,
                "p = 2, max lhs/rhs = " + fmt("%.6g", ratio));
}

// Both F checks read one computation.
const RoundTrip& cached_roundtrip_F() {
    static std::once_flag once;
    static RoundTrip rt;
    std::call_once(once, [] { rt = roundtrip_F(kRoundTripNodes); });
    return rt;
}

CheckResult roundtrip_f(const SuiteOptions&) {
    const auto& rt = cached_roundtrip_F();
    return make("roundtrip_F", rt.max_rel_error, 1e-3,
                "tail mass max " + fmt("%.3g", rt.max_tail_mass));
}

CheckResult roundtrip_f_tail(const SuiteOptions&) {
    const auto& rt = cached_roundtrip_F();
    return make("roundtrip_F_tail", rt.max_tail_mass, 1e-6, "tau-tail mass / integral mass");
}

CheckResult roundtrip_g(const SuiteOptions&) {
    const auto rt = roundtrip_G(kRoundTripNodes);
    return make("roundtrip_G", rt.max_rel_error, 1e-3, "max relative error");
}

const wedge::WedgeParams& demo_wedge() {
    static const wedge::WedgeParams params{1.4, tr::canonical::gaussian_index()};
    return params;
}

CheckResult pde_residual(const SuiteOptions&) {
    double worst = 0.0;
    for (double r : {0.5, 1.0, 2.0})
        for (double th : {0.1, 0.3, 0.6})
            worst = std::max(worst, wedge::pde_residual(demo_wedge(), {r, th}).residual);
    return make("pde_residual", worst, 1e-4, "semi-analytic, 3x3 grid");
}

CheckResult initial_condition(const SuiteOptions&) {
    const double d = wedge::initial_condition_check(demo_wedge(), kRoundTripNodes);
    return make("initial_condition", d, 1e-10, "same quadrature path");
}

CheckResult initial_condition_independent(const SuiteOptions&) {
    const double d = wedge::initial_condition_check(demo_wedge(), kRoundTripNodes,
                                                    wedge::InitialMode::independent);
    return make("initial_condition_independent", d, 1e-8, "cosine-integral route");
}

CheckResult wedge_decay(const SuiteOptions&) {
    double worst = 0.0;
    for (double th : {0.1, 0.3, 0.6}) worst = std::max(worst, wedge::decay_ratio(demo_wedge(), th));
    return make("wedge_decay", worst, 1e-3, "|u(10)| / |u(0.5)|");
}

using Check = std::function<CheckResult(const SuiteOptions&)>;

const std::vector<std::pair<std::string, Check>>& registry() {
    static const std::vector<std::pair<std::string, Check>> checks = {
        {"kernel_routes_fourier", kernel_routes_fourier},
        {"kernel_routes_mellin_barnes", kernel_routes_mellin_barnes},
        {"golden", golden_file},
        {"bounds", bounds},
        {"ode", ode},
        {"index_identity", index_identity},
        {"forward_routes", forward_routes},
        {"forward_sup_bound", forward_sup_bound},
        {"adjoint_routes", adjoint_routes},
        {"adjoint_pointwise_bound", adjoint_pointwise_bound},
        {"roundtrip_F", roundtrip_f},
        {"roundtrip_F_tail", roundtrip_f_tail},
        {"roundtrip_G", roundtrip_g},
        {"pde_residual", pde_residual},
        {"initial_condition", initial_condition},
        {"initial_condition_independent", initial_condition_independent},
        {"wedge_decay", wedge_decay},
    };
    return checks;
}

}  // namespace

RoundTrip roundtrip_F(const std::vector<double>& nodes) {
    const auto f = tr::canonical::zero_mean();
    const auto F = tr::memoize([f](double tau) { return tr::forward_F(f, tau).value; });
    RoundTrip out;
    double scale = 0.0;
    for (double x : nodes) {
        const auto inv = tr::invert_F(F, x);
        out.rows.push_back({x, inv.value, f(x), inv.err_est, inv.tail_mass});
        scale = std::max(scale, std::abs(f(x)));
        out.max_tail_mass = std::max(out.max_tail_mass, inv.tail_mass);
    }
    // f vanishes at x = 1, so errors are measured against the largest |f|.
    for (const auto& r : out.rows)
        out.max_rel_error = std::max(out.max_rel_error, std::abs(r.recovered - r.expected) / scale);
    return out;
}

RoundTrip roundtrip_G(const std::vector<double>& nodes) {
    const auto g = tr::canonical::gaussian_index();
    // G' from the cosine route with the closed-form transform of g; the
    // contour-route derivative gives the same values at ~300x the cost.
    const auto Gprime = tr::memoize([](double y) {
        return tr::adjoint_G_derivative_fourier_route(tr::canonical::gaussian_index_fourier, y).value;
    });
    RoundTrip out;
    double scale = 0.0;
    for (double x : nodes) {
        const auto inv = tr::invert_G(Gprime, x);
        out.rows.push_back({x, inv.value, g(x), inv.err_est, 0.0});
        scale = std::max(scale, std::abs(g(x)));
    }
    for (const auto& r : out.rows)
        out.max_rel_error = std::max(out.max_rel_error, std::abs(r.recovered - r.expected) / scale);
    return out;
}

const std::vector<std::string>& check_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& [name, fn] : registry()) n.push_back(name);
        return n;
    }();
    return names;
}

CheckResult run_check(const std::string& name, const SuiteOptions& opts) {
    for (const auto& [n, fn] : registry())
        if (n == name) {
            try {
                return fn(opts);
            } catch (const IoError&) {
                throw;
            } catch (const std::exception& ex) {
                CheckResult r;
                r.name = name;
                r.metric = std::nan("");
                r.detail = std::string("error: ") + ex.what();
                return r;
            }
        }
    throw DomainError("verify: unknown check '" + name + "'");
}

std::vector<CheckResult> run_suite(const SuiteOptions& opts, const std::vector<std::string>& only) {
    std::vector<std::string> names;
    for (const auto& n : check_names()) {
        if (n == "golden" && opts.golden_path.empty()) continue;
        if (only.empty() || std::find(only.begin(), only.end(), n) != only.end()) names.push_back(n);
    }
    for (const auto& n : only)
        if (std::find(check_names().begin(), check_names().end(), n) == check_names().end())
            throw DomainError("verify: unknown check '" + n + "'");
    return parallel_map(names.size(), opts.jobs, [&](std::size_t i) { return run_check(names[i], opts); });
}

}  // namespace ixt::verify
