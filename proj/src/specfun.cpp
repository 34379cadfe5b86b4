#include "ixt/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace ixt::specfun {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
const double kHalfLogTwoPi = 0.5 * std::log(2.0 * pi);

// B_{2k} / (2k (2k-1)), k = 1..10
constexpr std::array<double, 10> kStirling = {
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
};

// Valid for Re z >= 0 and |z| >= 8; the truncated series is below 1e-17 there.
ComplexScalar stirling(ComplexScalar z) {
    const ComplexScalar inv = 1.0 / z;
    const ComplexScalar inv2 = inv * inv;
    ComplexScalar series = 0.0;
    for (std::size_t k = kStirling.size(); k-- > 0;) series = series * inv2 + kStirling[k];
    return (z - 0.5) * std::log(z) - z + kHalfLogTwoPi + series * inv;
}

bool is_gamma_pole(ComplexScalar z) {
    if (std::abs(z.imag()) > 1e-14 || z.real() > 0.5) return false;
    return std::abs(z.real() - std::round(z.real())) <= 1e-14;
}

// Neumaier-compensated accumulator.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            carry += (sum - t) + v;
        else
            carry += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + carry; }
};

// -log(threshold) for the truncation of exp(-z (cosh u - 1)) integrands.
constexpr double kTailExponent = 46.0;

// Trapezoid rule for an even integrand on [0, upper] (f(0) weighted by 1/2),
// shared by both Macdonald integrals. The step is halved until two levels
// agree to the rounding floor of the sum.
template <class T, class F>
Estimate<T> even_trapezoid(F&& f, double upper, double h0, const char* what) {
    constexpr int kMaxLevels = 14;
    double h = h0;
    T sum = 0.5 * f(0.0);
    double abs_sum = std::abs(sum);
    const long first = static_cast<long>(std::ceil(upper / h));
    for (long j = 1; j <= first; ++j) {
        const T v = f(static_cast<double>(j) * h);
        sum += v;
        abs_sum += std::abs(v);
    }
    T estimate = h * sum;
    double diff = 0.0;
    for (int level = 1; level <= kMaxLevels; ++level) {
        h *= 0.5;
        const long nodes = static_cast<long>(std::ceil(upper / h));
        for (long j = 1; j <= nodes; j += 2) {
            const T v = f(static_cast<double>(j) * h);
            sum += v;
            abs_sum += std::abs(v);
        }
        const T next = h * sum;
        diff = std::abs(next - estimate);
        estimate = next;
        const double floor = 16.0 * kEps * h * abs_sum;
        if (level >= 2 && diff <= floor) return {estimate, floor + diff};
    }
    throw NoConvergenceError(std::string(what) + ": trapezoid refinement did not settle",
                             std::abs(estimate) + diff, std::abs(estimate));
}

}  // namespace

ComplexScalar log_gamma(ComplexScalar z) {
    if (!detail::finite(z)) throw DomainError("log_gamma: non-finite argument");
    if (is_gamma_pole(z)) throw DomainError("log_gamma: pole of the gamma function");
    // Shift into the Stirling region. Summing principal logs keeps the
    // result on the principal branch (cut along the negative real axis).
    ComplexScalar shift = 0.0;
    while (z.real() < 0.0 || std::abs(z) < 8.0) {
        shift += std::log(z);
        z += 1.0;
    }
    return stirling(z) - shift;
}

ComplexScalar gamma(ComplexScalar z) { return std::exp(log_gamma(z)); }

ComplexScalar reciprocal_gamma(ComplexScalar z) {
    if (is_gamma_pole(z)) return 0.0;
    return std::exp(-log_gamma(z));
}

double beta(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("beta: arguments must be positive");
    const double lb = log_gamma(a).real() + log_gamma(b).real() - log_gamma(a + b).real();
    return detail::require_finite(std::exp(lb), "beta");
}

EvalResult macdonald_imag_order(double tau, double z) {
    if (!(z > 0.0) || !std::isfinite(z) || !std::isfinite(tau))
        throw DomainError("macdonald_imag_order: requires z > 0");
    const double t = std::abs(tau);
    // exp(-z cosh u) = exp(-z) exp(-2 z sinh^2(u/2)); the scaled integrand
    // is below exp(-kTailExponent) beyond upper.
    const double upper = 2.0 * std::asinh(std::sqrt(kTailExponent / (2.0 * z)));
    const double strip = 0.8 * pi / 2.0;
    const double h0 = std::min(4.0 * std::min(0.5, 2.0 * pi * strip / (40.0 + t * strip)),
                               0.125 * upper);
    auto f = [z, t](double u) {
        const double s = std::sinh(0.5 * u);
        return std::exp(-2.0 * z * s * s) * std::cos(t * u);
    };
    const auto scaled = even_trapezoid<double>(f, upper, h0, "macdonald_imag_order");
    const double scale = std::exp(-z);
    const double tail = std::exp(-kTailExponent) / std::max(1.0, z * std::sinh(upper));
    return {scaled.value * scale, (scaled.err_est + tail) * scale};
}

ComplexEvalResult bessel_j_imag_order(double tau, double z) {
    if (!(z > 0.0) || !(z <= kMaxBesselArgument) || !(std::abs(tau) <= kMaxBesselOrder))
        throw DomainError("bessel_j_imag_order: outside 0 < z <= 100, |tau| <= 50");
    const double t = std::abs(tau);
    const ComplexScalar order(0.0, t);
    const ComplexScalar prefactor =
        std::exp(order * std::log(0.5 * z) - log_gamma(1.0 + order));

    const double q = -0.25 * z * z;
    ComplexScalar term = 1.0;
    CompensatedSum re, im;
    re.add(1.0);
    double abs_sum = 1.0;
    double remainder = 0.0;
    for (int k = 1;; ++k) {
        term *= q / (static_cast<double>(k) * (static_cast<double>(k) + order));
        if (!detail::finite(term)) throw OverflowError("bessel_j_imag_order: series overflow");
        re.add(term.real());
        im.add(term.imag());
        const double mag = std::abs(term);
        abs_sum += mag;
        const double next_ratio =
            std::abs(q) / ((k + 1.0) * std::abs(static_cast<double>(k + 1) + order));
        if (next_ratio < 0.5) {
            const double sum_mag = std::hypot(re.value(), im.value());
            if (mag <= kEps * sum_mag || mag == 0.0) {
                remainder = mag * next_ratio / (1.0 - next_ratio);
                break;
            }
        }
        if (k > 10000) throw NoConvergenceError("bessel_j_imag_order: series", 0.0, mag);
    }
    ComplexScalar value = prefactor * ComplexScalar(re.value(), im.value());
    if (!detail::finite(value)) throw OverflowError("bessel_j_imag_order: overflow");
    if (tau < 0.0) value = std::conj(value);
    const double err = std::abs(prefactor) * (remainder + 4.0 * kEps * abs_sum);
    return {value, err};
}

ComplexEvalResult macdonald_complex_arg(double nu, ComplexScalar w) {
    if (!(w.real() > 0.0) || !detail::finite(w))
        throw DomainError("macdonald_complex_arg: requires Re w > 0");
    if (!(nu >= 0.0) || !std::isfinite(nu))
        throw DomainError("macdonald_complex_arg: requires real nu >= 0");
    // Largest u still contributing: Re(w) 2 sinh^2(u/2) - nu u >= tail.
    double upper = 2.0 * std::asinh(std::sqrt(kTailExponent / (2.0 * w.real())));
    auto exponent = [&](double u) {
        const double s = std::sinh(0.5 * u);
        return 2.0 * w.real() * s * s - nu * u;
    };
    while (exponent(upper) < kTailExponent) upper += 0.25;
    // Analytic strip half-width of the integrand is pi/2 - |arg w|.
    const double strip = 0.8 * (0.5 * pi - std::abs(std::arg(w)));
    const double h0 = std::min(4.0 * std::min(0.5, 2.0 * pi * strip / (40.0 + nu * strip)),
                               0.125 * upper);
    auto f = [w, nu](double u) {
        const double s = std::sinh(0.5 * u);
        return std::exp(-2.0 * w * s * s) * std::cosh(nu * u);
    };
    const auto scaled = even_trapezoid<ComplexScalar>(f, upper, h0, "macdonald_complex_arg");
    const ComplexScalar scale = std::exp(-w);
    const double tail = std::exp(-kTailExponent) * std::max(1.0, upper);
    return {scaled.value * scale, (scaled.err_est + tail) * std::abs(scale)};
}

}  // namespace ixt::specfun
