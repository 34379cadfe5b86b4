#pragma once

// Invariant suite shared by the `verify` subcommand and the acceptance
// driver. Every check is deterministic: fixed grids, fixed RNG seed, no
// timings in the results.

#include <cstdint>
#include <string>
#include <vector>

namespace ixt::verify {

struct CheckResult {
    std::string name;
    bool pass = false;
    /// Worst observed value of the checked quantity.
    double metric = 0.0;
    /// pass iff metric <= threshold.
    double threshold = 0.0;
    std::string detail;
};

struct SuiteOptions {
    /// Empty skips the golden comparison.
    std::string golden_path;
    std::uint64_t seed = 20170101;
    int bound_samples = 1000;
    int jobs = 1;
};

struct RoundTripRow {
    double x = 0.0;
    double recovered = 0.0;
    double expected = 0.0;
    double err_est = 0.0;
    /// tau-tail mass relative to the integral (F direction only).
    double tail_mass = 0.0;
};

struct RoundTrip {
    std::vector<RoundTripRow> rows;
    /// max |recovered - expected| / max |expected| over the nodes.
    double max_rel_error = 0.0;
    double max_tail_mass = 0.0;
};

/// (1 - x) e^{-x} -> forward_F -> invert_F.
RoundTrip roundtrip_F(const std::vector<double>& nodes);
/// tau^2 e^{-tau^2} -> derivative of its adjoint transform -> invert_G.
RoundTrip roundtrip_G(const std::vector<double>& nodes);

/// Names in suite order.
const std::vector<std::string>& check_names();

/// Runs the named checks (all if empty); checks are independent and are
/// spread over opts.jobs workers, results in suite order.
std::vector<CheckResult> run_suite(const SuiteOptions& opts,
                                   const std::vector<std::string>& only = {});

CheckResult run_check(const std::string& name, const SuiteOptions& opts);

}  // namespace ixt::verify
