#pragma once

// Integration engines shared by every kernel and transform:
//
//   integrate_semi_infinite  exp-sinh substitution on [a, inf)
//   integrate_real_line      sinh-sinh substitution on (-inf, inf)
//   integrate_interval       tanh-sinh substitution on [a, b]
//   integrate_interval_gk    adaptive Gauss-Kronrod on [a, b] (no endpoint
//                            clustering, for integrands that are costly near
//                            an endpoint)
//   integrate_contour        truncated trapezoid on Re s = gamma computing
//                            (1/2 pi i) int g(s) x^{-s} ds
//
// The double-exponential engines halve the step until two consecutive levels
// agree; err_est is the last level difference (never below the rounding floor
// of the sum). Integrands may return double, complex<double> or Vec<T, N>.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <tuple>
#include <type_traits>
#include <utility>

#include "ixt/types.hpp"

namespace ixt::quad {

struct QuadratureSpec {
    double rel_tol = 1e-12;
    double abs_tol = 1e-15;
    int max_levels = 12;
    /// Factor applied to analytic tail bounds before comparing with abs_tol.
    double truncation_margin = 10.0;

    void validate() const;
};

/// Vertical Mellin-Barnes contour Re s = gamma, truncated at |Im s| <= height.
struct ContourSpec {
    double gamma = 0.25;
    /// 0 selects the height from the integrand's decay envelope.
    double height = 0.0;
    double nodes_per_unit = 8.0;

    void validate() const;
};

/// Declared decay of a contour integrand:
/// |g(gamma + i t)| <= C exp(-rate |t|) |t|^power for |t| >= onset, with C
/// calibrated from the integrand itself at |t| = onset.
struct ContourDecay {
    double rate = pi / 2.0;
    double power = 0.0;
    double onset = 1.0;
};

enum class DecayKind {
    exponential,       // |f(x)| <= C exp(-rate x)
    sqrt_exponential,  // |f(x)| <= C exp(-rate sqrt(x))
    gaussian,          // |f(x)| <= C exp(-rate x^2)
    power,             // |f(x)| <= C x^(-rate)
};

struct Decay {
    DecayKind kind = DecayKind::exponential;
    double rate = 1.0;
};

/// A real function on (0, inf) (or on R, for index-side functions) with the
/// metadata needed for rigorous tail truncation. The metadata must
/// over-estimate the true tail.
struct SampledFunction {
    std::function<double(double)> eval;
    /// f(x) = O(x^zero_exponent) as x -> 0+.
    double zero_exponent = 0.0;
    Decay decay;

    double operator()(double x) const { return eval(x); }
};

/// Small fixed-size vector so that several integrals sharing expensive
/// factors can run through one quadrature sweep.
template <class T, std::size_t N>
struct Vec {
    std::array<T, N> v{};

    T& operator[](std::size_t i) { return v[i]; }
    const T& operator[](std::size_t i) const { return v[i]; }

    Vec& operator+=(const Vec& o) {
        for (std::size_t i = 0; i < N; ++i) v[i] += o.v[i];
        return *this;
    }
    friend Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) {
        for (std::size_t i = 0; i < N; ++i) a.v[i] -= b.v[i];
        return a;
    }
    template <class S>
    friend Vec operator*(const S& s, Vec a) {
        for (auto& e : a.v) e *= s;
        return a;
    }
};

template <class T>
struct QuadratureResult : Estimate<T> {
    /// Quadrature approximation of int |f|, for error composition.
    double l1_norm = 0.0;
    int levels = 0;
    long evaluations = 0;
};

struct ContourResult : Estimate<ComplexScalar> {
    double height = 0.0;
    int levels = 0;
    long evaluations = 0;
};

template <std::size_t N>
struct ContourResultN {
    Vec<ComplexScalar, N> value;
    std::array<double, N> err_est{};
    double height = 0.0;
    int levels = 0;
};

namespace detail {

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const ComplexScalar& v) { return std::abs(v); }
template <class T, std::size_t N>
double magnitude(const Vec<T, N>& v) {
    double m = 0.0;
    for (const auto& e : v.v) m = std::max(m, std::abs(e));
    return m;
}

template <class T>
bool finite_value(const T& v) {
    return ixt::detail::finite(v);
}
template <class T, std::size_t N>
bool finite_value(const Vec<T, N>& v) {
    for (const auto& e : v.v)
        if (!ixt::detail::finite(e)) return false;
    return true;
}

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Node {
    double x = 0.0;
    double w = 0.0;
    bool valid = false;
};

// x = a + exp(pi/2 sinh t)
struct ExpSinhMap {
    double lower = 0.0;
    Node operator()(double t) const {
        const double e = std::exp(0.5 * pi * std::sinh(t));
        const double w = 0.5 * pi * std::cosh(t) * e;
        const double x = lower + e;
        return {x, w, std::isfinite(w) && std::isfinite(x) && e > 0.0 && x > lower};
    }
};

// x = sinh(pi/2 sinh t)
struct SinhSinhMap {
    Node operator()(double t) const {
        const double u = 0.5 * pi * std::sinh(t);
        const double x = std::sinh(u);
        const double w = 0.5 * pi * std::cosh(t) * std::cosh(u);
        return {x, w, std::isfinite(w) && std::isfinite(x)};
    }
};

// x = c + d tanh(pi/2 sinh t); the distance to the nearer endpoint is
// formed directly so nodes never collapse onto a or b.
struct TanhSinhMap {
    double a = 0.0;
    double b = 1.0;
    Node operator()(double t) const {
        const double half = 0.5 * (b - a);
        const double u = 0.5 * pi * std::sinh(t);
        const double e = std::exp(-2.0 * std::abs(u));
        const double gap = half * 2.0 * e / (1.0 + e);  // half (1 - tanh|u|)
        const double x = (t < 0.0) ? a + gap : b - gap;
        const double cu = std::cosh(u);
        const double w = half * 0.5 * pi * std::cosh(t) / (cu * cu);
        const bool ok = gap > 0.0 && x > a && x < b && std::isfinite(w) && w > 0.0;
        return {x, w, ok};
    }
};

template <class F, class Map>
auto de_trapezoid(F&& f, const Map& map, const QuadratureSpec& spec, const char* what)
    -> QuadratureResult<std::decay_t<std::invoke_result_t<F&, double>>> {
    using T = std::decay_t<std::invoke_result_t<F&, double>>;
    spec.validate();
    constexpr int kMinLevel = 3;
    constexpr double kTailRatio = 1e-3 * kEps;

    long evaluations = 0;
    double abs_sum = 0.0;
    auto term = [&](double t, bool& stop) -> T {
        const Node n = map(t);
        if (!n.valid) {
            stop = true;
            return T{};
        }
        const T fx = f(n.x);
        ++evaluations;
        if (!finite_value(fx))
            throw OverflowError(std::string(what) + ": integrand not finite at x = " +
                                std::to_string(n.x));
        const T wf = n.w * fx;
        abs_sum += n.w * magnitude(fx);
        return wf;
    };

    // Level 0 (h = 1) fixes how far each direction must go: stop after three
    // consecutive negligible terms or when the map leaves the representable
    // range.
    double h = 1.0;
    T sum{};
    bool dummy = false;
    sum += term(0.0, dummy);
    double t_hi = 0.0;
    double t_lo = 0.0;
    for (int dir : {1, -1}) {
        int quiet = 0;
        for (int j = 1; j < 64; ++j) {
            bool stop = false;
            const double t = dir * j * h;
            const T v = term(t, stop);
            if (stop) break;
            sum += v;
            (dir > 0 ? t_hi : t_lo) = t;
            if (magnitude(v) <= kTailRatio * abs_sum && j >= 2) {
                if (++quiet >= 3) break;
            } else {
                quiet = 0;
            }
        }
    }

    T estimate = h * sum;
    double previous_mag = magnitude(estimate);
    for (int level = 1; level <= spec.max_levels; ++level) {
        h *= 0.5;
        for (int dir : {1, -1}) {
            const double limit = dir > 0 ? t_hi : -t_lo;
            for (long j = 1; j * h <= limit; j += 2) {
                bool stop = false;
                const T v = term(dir * j * h, stop);
                if (stop) break;
                sum += v;
            }
        }
        const T next = h * sum;
        const double diff = magnitude(next - estimate);
        estimate = next;
        const double l1 = h * abs_sum;
        const double floor = 8.0 * kEps * l1;
        const double target = std::max(spec.abs_tol, spec.rel_tol * magnitude(estimate));
        if (level >= kMinLevel && (diff <= target || diff <= floor)) {
            QuadratureResult<T> r;
            r.value = estimate;
            r.err_est = std::max(diff, floor);
            r.l1_norm = l1;
            r.levels = level;
            r.evaluations = evaluations;
            return r;
        }
        previous_mag = magnitude(estimate) + diff;
    }
    throw NoConvergenceError(std::string(what) + ": no convergence within max_levels",
                             previous_mag, magnitude(estimate));
}

}  // namespace detail

/// int_lower^inf f(x) dx. Endpoint singularities at `lower` up to
/// logarithmic-squared or x^{-1/2} strength are handled by the substitution.
template <class F>
auto integrate_semi_infinite(F&& f, const QuadratureSpec& spec = {}, double lower = 0.0) {
    return detail::de_trapezoid(std::forward<F>(f), detail::ExpSinhMap{lower}, spec,
                                "integrate_semi_infinite");
}

/// int_0^inf f(x) dx for integrands with exp(-c sqrt(x)) tails: runs the
/// exp-sinh rule after x = v^2/2, which turns the tail into exp(-c' v).
template <class F>
auto integrate_semi_infinite_sqrt(F&& f, const QuadratureSpec& spec = {}) {
    using T = std::decay_t<std::invoke_result_t<F&, double>>;
    auto g = [&f](double v) -> T {
        const double x = 0.5 * v * v;
        if (x == 0.0) return T{};  // underflow deep in the left tail
        return v * f(x);
    };
    return detail::de_trapezoid(g, detail::ExpSinhMap{0.0}, spec, "integrate_semi_infinite");
}

/// Dispatches on the decay descriptor: sqrt-exponential tails get the
/// x = v^2/2 substitution.
template <class F>
auto integrate_semi_infinite(F&& f, const QuadratureSpec& spec, const Decay& decay) {
    if (decay.kind == DecayKind::sqrt_exponential)
        return integrate_semi_infinite_sqrt(std::forward<F>(f), spec);
    return integrate_semi_infinite(std::forward<F>(f), spec, 0.0);
}

template <class F>
auto integrate_real_line(F&& f, const QuadratureSpec& spec = {}) {
    return detail::de_trapezoid(std::forward<F>(f), detail::SinhSinhMap{}, spec,
                                "integrate_real_line");
}

template <class F>
auto integrate_interval(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
    if (!(b > a)) throw DomainError("integrate_interval: requires a < b");
    return detail::de_trapezoid(std::forward<F>(f), detail::TanhSinhMap{a, b}, spec,
                                "integrate_interval");
}

/// Adaptive 31-point Gauss-Kronrod on [a, b] for real integrands.
/// noise_floor is the relative accuracy of f itself: an error below
/// noise_floor * int |f| is accepted, since refinement cannot improve on it.
QuadratureResult<double> integrate_interval_gk(const std::function<double(double)>& f,
                                               double a, double b,
                                               const QuadratureSpec& spec = {},
                                               double noise_floor = 0.0);

namespace detail {

template <class T>
auto times_power(const T& g, ComplexScalar xs) {
    return xs * g;
}

// Height at which the calibrated envelope, integrated over the two tails,
// falls below the tolerance.
double contour_height(double envelope_at_onset, const ContourDecay& decay, double tol);

template <class G>
auto contour_trapezoid(G&& g, const ContourSpec& contour, double x, const QuadratureSpec& spec,
                       const ContourDecay& decay) {
    using T = std::decay_t<std::invoke_result_t<G&, ComplexScalar>>;
    contour.validate();
    spec.validate();
    if (!(x > 0.0)) throw DomainError("integrate_contour: requires x > 0");
    const double log_x = std::log(x);
    const double gam = contour.gamma;

    auto integrand = [&](double t) -> T {
        const ComplexScalar s(gam, t);
        const ComplexScalar xs = std::exp(-s * log_x);
        T v = g(s);
        if (!finite_value(v))
            throw OverflowError("integrate_contour: integrand not finite at Im s = " +
                                std::to_string(t));
        return xs * v;
    };

    double height = contour.height;
    if (height <= 0.0) {
        const double onset = std::max(decay.onset, 1.0);
        const double at_onset =
            std::max(magnitude(integrand(onset)), magnitude(integrand(-onset)));
        height = contour_height(at_onset, decay, spec.abs_tol / spec.truncation_margin);
    }

    const double h0 = 1.0 / contour.nodes_per_unit;
    double h = h0;
    const long n0 = static_cast<long>(std::ceil(height / h0));
    double abs_sum = 0.0;
    long evaluations = 0;
    T sum{};
    auto add = [&](double t, double weight) {
        const T v = integrand(t);
        ++evaluations;
        abs_sum += weight * magnitude(v);
        sum += weight * v;
    };
    add(0.0, 1.0);
    for (long j = 1; j <= n0; ++j) {
        const double w = (j == n0) ? 0.5 : 1.0;
        add(j * h, w);
        add(-j * h, w);
    }
    const double span = n0 * h0;

    // The tail beyond the truncation height is bounded by the edge value
    // over the declared rate; reject heights that leave too much behind.
    const double edge = std::max(magnitude(integrand(span)), magnitude(integrand(-span)));
    const double rate = std::max(decay.rate, 1e-3);
    const double tail = spec.truncation_margin * edge / (pi * rate);

    T estimate = (h / (2.0 * pi)) * sum;
    if (tail > std::max(spec.abs_tol, spec.rel_tol * magnitude(estimate)))
        throw TruncationError("integrate_contour: envelope at height " + std::to_string(span) +
                              " exceeds tolerance (" + std::to_string(tail) + ")");
    double diff = 0.0;
    for (int level = 1; level <= spec.max_levels; ++level) {
        h *= 0.5;
        const long n = static_cast<long>(std::llround(span / h));
        for (long j = 1; j < n; j += 2) {
            add(j * h, 1.0);
            add(-j * h, 1.0);
        }
        const T next = (h / (2.0 * pi)) * sum;
        const auto delta = next - estimate;
        diff = magnitude(delta);
        estimate = next;
        const double l1 = h * abs_sum / (2.0 * pi);
        const double floor = 8.0 * kEps * l1;
        const double target = std::max(spec.abs_tol, spec.rel_tol * magnitude(estimate));
        if (level >= 2 && (diff <= target || diff <= floor)) {
            return std::tuple<T, T, double, double, int, long>{estimate, delta,
                                                               std::max(diff, floor) + tail,
                                                               span, level, evaluations};
        }
    }
    throw NoConvergenceError("integrate_contour: no convergence within max_levels",
                             magnitude(estimate) + diff, magnitude(estimate));
}

}  // namespace detail

/// (1/2 pi i) int_{gamma - i T}^{gamma + i T} g(s) x^{-s} ds.
template <class G>
ContourResult integrate_contour(G&& g, const ContourSpec& contour, double x,
                                const QuadratureSpec& spec = {},
                                const ContourDecay& decay = {}) {
    auto [value, delta, err, height, levels, evals] =
        detail::contour_trapezoid(std::forward<G>(g), contour, x, spec, decay);
    (void)delta;
    ContourResult r;
    r.value = value;
    r.err_est = err;
    r.height = height;
    r.levels = levels;
    r.evaluations = evals;
    return r;
}

/// Vector-valued variant: several contour integrals sharing one sweep.
template <std::size_t N, class G>
ContourResultN<N> integrate_contour_n(G&& g, const ContourSpec& contour, double x,
                                      const QuadratureSpec& spec = {},
                                      const ContourDecay& decay = {}) {
    auto [value, delta, err, height, levels, evals] =
        detail::contour_trapezoid(std::forward<G>(g), contour, x, spec, decay);
    (void)evals;
    ContourResultN<N> r;
    r.value = value;
    const double shared = err - detail::magnitude(delta);
    for (std::size_t i = 0; i < N; ++i) r.err_est[i] = std::abs(delta[i]) + shared;
    r.height = height;
    r.levels = levels;
    return r;
}

}  // namespace ixt::quad
