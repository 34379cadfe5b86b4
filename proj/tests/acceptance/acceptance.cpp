// Acceptance driver: one PASS/FAIL line per criterion.
//
//   acceptance [--cli PATH] [--golden PATH]

#include <array>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <CLI11.hpp>

#include "ixt/verify.hpp"

namespace {

using Clock = std::chrono::steady_clock;

struct Criterion {
    int id;
    std::string title;
    std::vector<std::string> checks;
    double time_limit = 0.0;  // seconds, 0 = none
};

struct Shell {
    int code = -1;
    std::string out;
};

Shell shell(const std::string& command) {
    Shell s;
    FILE* pipe = popen((command + " 2>/dev/null").c_str(), "r");
    if (!pipe) return s;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) s.out.append(buf.data(), n);
    const int status = pclose(pipe);
    s.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return s;
}

std::string fmt_g(double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.3g", v);
    return b;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    std::string cli = IXT_CLI_PATH;
    std::string golden = IXT_GOLDEN_PATH;
    app.add_option("--cli", cli, "path of the ixt executable");
    app.add_option("--golden", golden, "committed golden file");
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> criteria{
        {1, "kernel route agreement", {"kernel_routes_fourier", "kernel_routes_mellin_barnes"}, 60.0},
        {2, "golden regression", {"golden"}},
        {3, "inequality suite", {"bounds"}},
        {4, "ODE residual", {"ode"}},
        {5, "index identity", {"index_identity"}},
        {6, "forward-route triangle and sup bound", {"forward_routes", "forward_sup_bound"}},
        {7, "adjoint-route pair and pointwise bound", {"adjoint_routes", "adjoint_pointwise_bound"}},
        {8, "round trips", {"roundtrip_F", "roundtrip_F_tail", "roundtrip_G"}, 300.0},
        {9, "PDE residual and initial condition",
         {"pde_residual", "initial_condition", "initial_condition_independent"}},
    };

    ixt::verify::SuiteOptions opts;
    opts.golden_path = golden;
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = Clock::now();
        bool pass = true;
        std::ostringstream detail;
        for (const auto& name : c.checks) {
            const auto r = ixt::verify::run_check(name, opts);
            pass = pass && r.pass;
            detail << " " << name << "=" << fmt_g(r.metric) << (r.pass ? "<=" : ">") << fmt_g(r.threshold);
        }
        const double secs = std::chrono::duration<double>(Clock::now() - start).count();
        if (c.time_limit > 0.0) {
            const bool in_time = secs <= c.time_limit;
            pass = pass && in_time;
            detail << " time=" << fmt_g(secs) << "s" << (in_time ? "<=" : ">") << fmt_g(c.time_limit) << "s";
        } else {
            detail << " time=" << fmt_g(secs) << "s";
        }
        failures += !pass;
        std::cout << (pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.title << "):"
                  << detail.str() << std::endl;
    }

    // Criterion 10 drives the executable itself.
    const std::string verify = cli + " verify --golden " + golden + " --format json";
    const auto first = shell(verify);
    const auto second = shell(verify);
    const bool identical = first.out == second.out && !first.out.empty() && first.code == second.code;
    const std::vector<std::pair<std::string, int>> cases{
        {cli + " kernel --tau 0 --x 1 --route direct", 2},
        {cli + " kernel --tau 1 --x 1 --route all --tol 1e-300", 3},
        {cli + " verify --golden missing.json", 4},
    };
    bool contract = true;
    std::ostringstream detail;
    detail << " verify twice: " << (identical ? "identical" : "different") << " (exit " << first.code << ")";
    for (const auto& [cmd, want] : cases) {
        const int got = shell(cmd).code;
        contract = contract && got == want;
        detail << "; exit " << got << (got == want ? "==" : "!=") << want;
    }
    const bool pass10 = identical && contract;
    failures += !pass10;
    std::cout << (pass10 ? "PASS" : "FAIL") << " criterion 10 (CLI determinism and exit codes):" << detail.str()
              << std::endl;
    return failures == 0 ? 0 : 1;
}
