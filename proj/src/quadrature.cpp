#include "ixt/quadrature.hpp"

#include <queue>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace ixt::quad {

void QuadratureSpec::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
        throw DomainError("QuadratureSpec: tolerances must be positive");
    if (max_levels < 3 || max_levels > 20)
        throw DomainError("QuadratureSpec: max_levels must lie in [3, 20]");
    if (!(truncation_margin >= 1.0))
        throw DomainError("QuadratureSpec: truncation_margin must be >= 1");
}

void ContourSpec::validate() const {
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw DomainError("ContourSpec: gamma must be positive");
    if (!(height >= 0.0) || !std::isfinite(height))
        throw DomainError("ContourSpec: height must be >= 0 (0 = automatic)");
    if (!(nodes_per_unit > 0.0) || !std::isfinite(nodes_per_unit))
        throw DomainError("ContourSpec: nodes_per_unit must be positive");
}

namespace detail {

double contour_height(double envelope_at_onset, const ContourDecay& decay, double tol) {
    const double onset = std::max(decay.onset, 1.0);
    const double rate = std::max(decay.rate, 1e-3);
    if (!(envelope_at_onset > 0.0)) return onset + 1.0;
    // Two tails of C exp(-rate t) t^power, each bounded by the edge value
    // over rate (the power factor is absorbed by stepping past it).
    const double log_c = std::log(envelope_at_onset) + rate * onset -
                         decay.power * std::log(onset);
    double t = onset;
    for (int i = 0; i < 4000; ++i) {
        const double log_edge = log_c - rate * t + decay.power * std::log(t);
        const double slope = rate - std::max(0.0, decay.power) / t;
        if (slope > 0.5 * rate && log_edge - std::log(pi * slope) < std::log(tol)) return t;
        t += 0.25;
    }
    throw TruncationError("integrate_contour: declared envelope never falls below tolerance");
}

}  // namespace detail

QuadratureResult<double> integrate_interval_gk(const std::function<double(double)>& f,
                                               double a, double b,
                                               const QuadratureSpec& spec,
                                               double noise_floor) {
    spec.validate();
    if (!(noise_floor >= 0.0)) throw DomainError("integrate_interval_gk: negative noise floor");
    if (!(b > a)) throw DomainError("integrate_interval_gk: requires a < b");
    using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;
    // Globally adaptive: split the panel with the largest error until the
    // summed error meets the absolute or relative target.
    struct Panel {
        double a, b, value, error, l1;
        bool operator<(const Panel& o) const { return error < o.error; }
    };
    auto panel = [&](double lo, double hi) {
        Panel p{lo, hi, 0.0, 0.0, 0.0};
        p.value = Rule::integrate(f, lo, hi, 0, 0.0, &p.error, &p.l1);
        return p;
    };
    std::priority_queue<Panel> panels;
    panels.push(panel(a, b));
    double value = panels.top().value, error = panels.top().error, l1 = panels.top().l1;
    const std::size_t budget = std::size_t{1} << std::min(spec.max_levels, 16);
    auto target = [&] {
        return std::max({spec.abs_tol, spec.rel_tol * std::abs(value), std::max(8.0 * detail::kEps, noise_floor) * l1});
    };
    while (error > target() && panels.size() < budget) {
        const Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            panels.push(worst);
            break;
        }
        const Panel left = panel(worst.a, mid), right = panel(mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        l1 += left.l1 + right.l1 - worst.l1;
        panels.push(left);
        panels.push(right);
    }
    // Re-sum to shed accumulated rounding from the running updates.
    value = error = l1 = 0.0;
    for (auto q = panels; !q.empty(); q.pop()) {
        value += q.top().value;
        error += q.top().error;
        l1 += q.top().l1;
    }
    if (!std::isfinite(value)) throw OverflowError("integrate_interval_gk: non-finite result");
    const double floor = std::max(8.0 * detail::kEps, noise_floor) * l1;
    if (error > target())
        throw NoConvergenceError("integrate_interval_gk: error estimate above tolerance",
                                 value + error, value);
    QuadratureResult<double> r;
    r.value = value;
    r.err_est = std::max(error, floor);
    r.l1_norm = l1;
    r.levels = static_cast<int>(panels.size());
    return r;
}

}  // namespace ixt::quad
