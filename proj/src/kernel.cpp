#include "ixt/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "ixt/specfun.hpp"

namespace ixt::kernel {
namespace {

const double kSqrtPi = std::sqrt(pi);

double bessel_argument(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("kernel: requires x > 0");
    return 2.0 * std::sqrt(2.0 * x);
}

bool is_nonpositive_integer(ComplexScalar z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::round(z.real());
}

// Gamma((1 + s)/2) / Gamma(1 - s/2) Gamma((s + i tau)/2) Gamma((s - i tau)/2) s
ComplexScalar phi_prime_density(double tau, ComplexScalar s) {
    const ComplexScalar den = 1.0 - 0.5 * s;
    if (is_nonpositive_integer(den)) return 0.0;
    const ComplexScalar it(0.0, tau);
    using specfun::log_gamma;
    return s * std::exp(log_gamma(0.5 * (1.0 + s)) + log_gamma(0.5 * (s + it)) +
                        log_gamma(0.5 * (s - it)) - log_gamma(den));
}

// Upper bound for |K_0(y)|, y > 0, used for tail truncation.
double k0_envelope(double y) { return std::sqrt(pi / (2.0 * y)) * std::exp(-y); }

bool direct_available(double tau, double x) {
    const double t = std::abs(tau);
    return t >= kTauMin && t <= specfun::kMaxBesselOrder &&
           2.0 * std::sqrt(2.0 * x) <= specfun::kMaxBesselArgument;
}

}  // namespace

ComplexScalar psi_mellin_density(double tau, ComplexScalar s) {
    const ComplexScalar den = 0.5 * (1.0 - s);
    if (is_nonpositive_integer(den)) return 0.0;
    const ComplexScalar it(0.0, tau);
    using specfun::log_gamma;
    return std::exp(log_gamma(0.5 * s) + log_gamma(0.5 * (s + it)) + log_gamma(0.5 * (s - it)) -
                    log_gamma(den));
}

double rotated_k0_cutoff(double x, double tol) {
    if (!(x > 0.0)) throw DomainError("rotated_k0_cutoff: requires x > 0");
    // The envelope decays double exponentially, so the tail past U is at
    // most its value at U over the local slope of the exponent.
    auto tail = [x](double u) {
        const double y = 2.0 * std::sqrt(2.0 * x * std::cosh(u));
        const double slope = std::sqrt(2.0 * x) * std::sinh(u) / std::sqrt(std::cosh(u));
        return k0_envelope(y) / std::max(slope, 1e-300);
    };
    double upper = 0.5;
    while (tail(upper) > tol) upper += 0.25;
    return upper;
}

std::string_view route_name(Route r) {
    switch (r) {
        case Route::direct: return "direct";
        case Route::fourier: return "fourier";
        case Route::mellin_barnes: return "mellin_barnes";
    }
    return "unknown";
}

Route parse_route(std::string_view name) {
    if (name == "direct") return Route::direct;
    if (name == "fourier") return Route::fourier;
    if (name == "mellin_barnes" || name == "mb") return Route::mellin_barnes;
    throw DomainError("unknown kernel route: " + std::string(name));
}

EvalResult psi_direct(double tau, double x) {
    const double z = bessel_argument(x);
    const double t = std::abs(tau);
    if (t < kTauMin)
        throw RouteUnavailableError("psi_direct: |tau| below tau_min = 1e-3; use the fourier route");
    const auto k = specfun::macdonald_imag_order(t, z);
    const auto j = specfun::bessel_j_imag_order(t, z);
    const double sh = std::sinh(0.5 * pi * t);
    const double value = k.value * j.value.imag() / sh;
    const double err = (std::abs(j.value.imag()) * k.err_est + std::abs(k.value) * j.err_est) / sh;
    return {detail::require_finite(value, "psi_direct"), err};
}

EvalResult re_k0_rotated(double y) {
    if (!(y > 0.0)) throw DomainError("re_k0_rotated: requires y > 0");
    const ComplexScalar w = 4.0 * std::polar(1.0, 0.25 * pi) * std::sqrt(y);
    const auto k = specfun::macdonald_complex_arg(0.0, w);
    return {k.value.real(), k.err_est};
}

EvalResult psi_fourier(double tau, double x, const quad::QuadratureSpec& spec) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("psi_fourier: requires x > 0");
    spec.validate();
    const double t = std::abs(tau);
    // |Re K_0(4 e^{i pi/4} sqrt(x cosh u))| <= K_0(2 sqrt(2 x cosh u)).
    const double tail = 1e-3 * spec.abs_tol / spec.truncation_margin;
    const double upper = rotated_k0_cutoff(x, tail);

    double kernel_err = 0.0;
    auto integrand = [&](double u) {
        const auto k = re_k0_rotated(x * std::cosh(u));
        kernel_err = std::max(kernel_err, k.err_est);
        return std::cos(t * u) * k.value;
    };
    const auto r = quad::integrate_interval_gk(integrand, 0.0, upper, spec);
    const double value = -(2.0 / pi) * r.value;
    const double err =
        (2.0 / pi) * (r.err_est + kernel_err * upper + spec.truncation_margin * tail);
    return {detail::require_finite(value, "psi_fourier"), err};
}

ContourEval psi_mellin_barnes(double tau, double x, const quad::ContourSpec& contour,
                              const quad::QuadratureSpec& spec) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("psi_mellin_barnes: requires x > 0");
    const double t = std::abs(tau);
    const quad::ContourDecay decay{0.5 * pi, 2.0 * contour.gamma - 1.5, t + 2.0};
    const auto r = quad::integrate_contour([t](ComplexScalar s) { return psi_mellin_density(t, s); },
                                           contour, x, spec, decay);
    const double scale = 1.0 / (8.0 * kSqrtPi);
    ContourEval out;
    out.value = -scale * r.value.real();
    out.err_est = scale * r.err_est;
    out.imag_residue = scale * std::abs(r.value.imag());
    out.height = r.height;
    return out;
}

EvalResult psi_auto(double tau, double x) {
    if (direct_available(tau, x)) return psi_direct(tau, x);
    return psi_fourier(tau, x);
}

KernelPoint psi(Route route, double tau, double x, const quad::ContourSpec& contour) {
    EvalResult r;
    switch (route) {
        case Route::direct: r = psi_direct(tau, x); break;
        case Route::fourier: r = psi_fourier(tau, x); break;
        case Route::mellin_barnes: r = psi_mellin_barnes(tau, x, contour); break;
    }
    return {tau, x, route, r.value, r.err_est};
}

std::array<ContourEval, 5> psi_derivatives(double tau, double x, const quad::ContourSpec& contour,
                                           const quad::QuadratureSpec& spec) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("psi_derivative_x: requires x > 0");
    const double t = std::abs(tau);
    // Component k integrates (-1)^k (s)_k g(s) x^{-s}, i.e. x^k times the
    // k-th derivative, which keeps the components on a common scale.
    auto g = [t](ComplexScalar s) {
        quad::Vec<ComplexScalar, 5> v;
        ComplexScalar factor = 1.0;
        const ComplexScalar base = psi_mellin_density(t, s);
        for (int k = 0; k < 5; ++k) {
            v[k] = factor * base;
            factor *= -(s + static_cast<double>(k));
        }
        return v;
    };
    const quad::ContourDecay decay{0.5 * pi, 2.0 * contour.gamma - 1.5 + 4.0, t + 2.0};
    const auto r = quad::integrate_contour_n<5>(g, contour, x, spec, decay);
    std::array<ContourEval, 5> out;
    double xk = 1.0;
    const double scale = 1.0 / (8.0 * kSqrtPi);
    for (int k = 0; k < 5; ++k) {
        out[k].value = -scale * r.value[k].real() / xk;
        out[k].err_est = scale * r.err_est[k] / xk;
        out[k].imag_residue = scale * std::abs(r.value[k].imag()) / xk;
        out[k].height = r.height;
        xk *= x;
    }
    return out;
}

ContourEval psi_derivative_x(double tau, double x, int order, const quad::ContourSpec& contour,
                             const quad::QuadratureSpec& spec) {
    if (order < 1 || order > 4) throw DomainError("psi_derivative_x: order must be 1..4");
    return psi_derivatives(tau, x, contour, spec)[order];
}

EvalResult phi_direct(double tau, double x) {
    const double z = bessel_argument(x);
    const double t = std::abs(tau);
    const auto k = specfun::macdonald_imag_order(t, z);
    const auto j = specfun::bessel_j_imag_order(t, z);
    const double value = k.value * j.value.real();
    const double err = std::abs(j.value.real()) * k.err_est + std::abs(k.value) * j.err_est;
    return {detail::require_finite(value, "phi_direct"), err};
}

ContourEval phi_derivative_x(double tau, double x, const quad::ContourSpec& contour,
                             const quad::QuadratureSpec& spec) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("phi_derivative_x: requires x > 0");
    if (!(contour.gamma > 0.0 && contour.gamma < 1.0))
        throw DomainError("phi_derivative_x: contour abscissa must lie in (0, 1)");
    const double t = std::abs(tau);
    const double ch = std::cosh(0.5 * pi * t);
    if (!std::isfinite(ch)) throw OverflowError("phi_derivative_x: cosh(pi tau / 2) overflows");
    // The prefactor amplifies absolute errors of the contour value.
    quad::QuadratureSpec scaled = spec;
    scaled.abs_tol = std::max(spec.abs_tol / ch, 1e-300);
    const quad::ContourDecay decay{0.5 * pi, 2.0 * contour.gamma - 0.5, t + 2.0};
    const auto r = quad::integrate_contour(
        [t](ComplexScalar s) { return phi_prime_density(t, s); }, contour, x, scaled, decay);
    const double scale = ch / (8.0 * kSqrtPi * x);
    ContourEval out;
    out.value = -scale * r.value.real();
    out.err_est = scale * r.err_est;
    out.imag_residue = scale * std::abs(r.value.imag());
    out.height = r.height;
    return out;
}

double bound_delta_rhs(double tau, double x, double delta) {
    if (!(delta >= 0.0 && delta < 0.5 * pi))
        throw DomainError("bound_delta_rhs: delta must lie in [0, pi/2)");
    if (!(x > 0.0)) throw DomainError("bound_delta_rhs: requires x > 0");
    const double arg = std::cos(0.5 * delta) * std::sqrt(2.0 * x * std::cos(delta));
    const double k0 = specfun::macdonald_imag_order(0.0, arg).value;
    return (4.0 / pi) * std::exp(-delta * std::abs(tau)) * k0 * k0;
}

BoundReport check_bound_delta(double tau, double x, double delta) {
    BoundReport r;
    r.tau = tau;
    r.x = x;
    r.delta = delta;
    r.rhs = bound_delta_rhs(tau, x, delta);
    r.lhs = std::abs(psi_fourier(tau, x).value);
    r.satisfied = r.lhs <= r.rhs * (1.0 + 1e-10);
    return r;
}

IndexIntegralReport index_integral_check(double x, double u) {
    if (!(x > 0.0)) throw DomainError("index_integral_check: requires x > 0");
    constexpr double kDelta = 1.2;
    constexpr double kTol = 1e-12;
    const quad::QuadratureSpec spec;
    // Tail of the tau-integral: int_T^inf |Psi| <= rhs(T, delta) / delta.
    const double c = bound_delta_rhs(0.0, x, kDelta) / kDelta;
    const double upper =
        std::max(1.0, std::log(spec.truncation_margin * c / kTol) / kDelta);

    IndexIntegralReport rep;
    rep.x = x;
    rep.u = u;
    rep.truncation = upper;
    rep.tail_bound = c * std::exp(-kDelta * upper);
    double kernel_err = 0.0;
    auto f = [&](double tau) {
        const auto p = psi_auto(tau, x);
        kernel_err = std::max(kernel_err, p.err_est);
        return std::cos(tau * u) * p.value;
    };
    const auto lhs = quad::integrate_interval_gk(f, 0.0, upper, spec);
    rep.lhs = lhs.value;
    rep.lhs_err = lhs.err_est + rep.tail_bound + kernel_err * upper;
    const auto rhs = re_k0_rotated(x * std::cosh(u));
    rep.rhs = -rhs.value;
    rep.rhs_err = rhs.err_est;
    return rep;
}

double OdeTerms::scale() const {
    return std::max({std::abs(fourth), std::abs(third), std::abs(second), std::abs(zeroth)});
}

OdeTerms ode_terms(double tau, double x, const std::array<double, 5>& d) {
    OdeTerms t;
    t.fourth = x * x * d[4];
    t.third = 5.0 * x * d[3];
    t.second = (4.0 + tau * tau) * d[2];
    t.zeroth = 16.0 * d[0];
    return t;
}

double ode_residual(double tau, double x, const quad::ContourSpec& contour) {
    const auto d = psi_derivatives(tau, x, contour);
    const auto terms =
        ode_terms(tau, x, {d[0].value, d[1].value, d[2].value, d[3].value, d[4].value});
    const double scale = terms.scale();
    if (scale == 0.0) return 0.0;
    return std::abs(terms.sum()) / scale;
}

}  // namespace ixt::kernel
