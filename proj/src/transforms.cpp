#include "ixt/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <memory>
#include <mutex>
#include <unordered_map>

#include "ixt/parallel.hpp"
#include "ixt/specfun.hpp"

namespace ixt::transforms {
namespace {

using quad::QuadratureSpec;

const double kSqrtPi = std::sqrt(pi);
const double kSqrt2OverPi = std::sqrt(2.0 / pi);

// Beyond sqrt(2x) = 46 the kernel envelope (4/pi) K_0^2(sqrt(2x)) is below
// 1e-40, so x-integrals against Psi or Phi stop there.
constexpr double kKernelReach = 46.0;

bool beyond_kernel_reach(double x) { return std::sqrt(2.0 * x) > kKernelReach; }

// Abscissa past which the declared decay leaves less than e^{-70}.
double decay_horizon(const Decay& d) {
    const double rate = std::max(d.rate, 1e-6);
    switch (d.kind) {
        case DecayKind::exponential: return 70.0 / rate;
        case DecayKind::sqrt_exponential: return std::pow(70.0 / rate, 2);
        case DecayKind::gaussian: return std::sqrt(70.0 / rate);
        case DecayKind::power: return 1e8;
    }
    return 1e8;
}

double k0_squared(double x) {
    const double k = specfun::macdonald_imag_order(0.0, std::sqrt(2.0 * x)).value;
    return k * k;
}

bool even_integer(double p) { return p == std::round(p) && std::fmod(p, 2.0) == 0.0; }

// Sign changes of fn on the given (sorted) abscissae, refined by bisection.
std::vector<double> sign_changes(const std::function<double(double)>& fn,
                                 const std::vector<double>& grid) {
    std::vector<double> roots;
    double a = grid.front();
    double fa = fn(a);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double b = grid[i];
        const double fb = fn(b);
        if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0)) {
            double lo = a, hi = b, flo = fa;
            for (int it = 0; it < 80 && hi - lo > 1e-15 * std::abs(hi); ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = fn(mid);
                if ((fm < 0.0) == (flo < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        if (fb != 0.0) {
            a = b;
            fa = fb;
        }
    }
    return roots;
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < n; ++i) g[i] = std::exp(a + (b - a) * i / (n - 1));
    return g;
}

// int_0^inf weight(x) |core(x)|^p dx, split at sign changes of core so every
// piece is smooth.
EvalResult integrate_abs_power(const std::function<double(double)>& core,
                               const std::function<double(double)>& weight, double p,
                               const Decay& decay, const QuadratureSpec& spec) {
    auto integrand = [&](double x) {
        const double c = core(x);
        if (c == 0.0) return 0.0;
        return weight(x) * std::pow(std::abs(c), p);
    };
    std::vector<double> roots;
    if (!even_integer(p)) roots = sign_changes(core, log_grid(1e-8, decay_horizon(decay), 400));
    if (roots.empty()) {
        const auto r = quad::integrate_semi_infinite(integrand, spec, decay);
        return {r.value, r.err_est};
    }
    EvalResult total;
    double a = 0.0;
    for (double r : roots) {
        const auto piece = quad::integrate_interval(integrand, a, r, spec);
        total.value += piece.value;
        total.err_est += piece.err_est;
        a = r;
    }
    const auto tail = quad::integrate_semi_infinite(integrand, spec, a);
    total.value += tail.value;
    total.err_est += tail.err_est;
    return total;
}

// int_R |core(t)|^p dt with the same splitting.
EvalResult integrate_abs_power_line(const std::function<double(double)>& core, double p,
                                    const Decay& decay, const QuadratureSpec& spec) {
    auto integrand = [&](double t) {
        const double c = core(t);
        if (c == 0.0) return 0.0;
        return std::pow(std::abs(c), p);
    };
    std::vector<double> roots;
    if (!even_integer(p)) {
        const double h = decay_horizon(decay);
        std::vector<double> grid(801);
        for (int i = 0; i <= 800; ++i) grid[i] = -h + 2.0 * h * i / 800.0;
        roots = sign_changes(core, grid);
    }
    if (roots.empty()) {
        const auto r = quad::integrate_real_line(integrand, spec);
        return {r.value, r.err_est};
    }
    const double first = roots.front();
    const auto left = quad::integrate_semi_infinite(
        [&](double u) { return integrand(first - u); }, spec, 0.0);
    EvalResult total{left.value, left.err_est};
    for (std::size_t i = 1; i < roots.size(); ++i) {
        const auto piece = quad::integrate_interval(integrand, roots[i - 1], roots[i], spec);
        total.value += piece.value;
        total.err_est += piece.err_est;
    }
    const auto right = quad::integrate_semi_infinite(integrand, spec, roots.back());
    total.value += right.value;
    total.err_est += right.err_est;
    return total;
}

void require_l0(const SampledFunction& f, const char* what) {
    if (!f.eval) throw DomainError(std::string(what) + ": empty function");
    if (!(f.zero_exponent > -1.0))
        throw DivergenceError(std::string(what) +
                              ": zero_exponent <= -1, the K_0^2-weighted integral diverges");
}

// Gauss-Kronrod over [-T, T] of Psi_tau(x) e^{theta tau} g(tau), folded onto
// [0, T] since Psi is even in tau.
EvalResult index_integral(const SampledFunction& g, double x, double theta,
                          const QuadratureSpec& spec,
                          const std::function<EvalResult(double, double)>& kernel,
                          double noise_floor = 0.0) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("adjoint transform: requires x > 0");
    if (!g.eval) throw DomainError("adjoint transform: empty function");
    const double upper = index_truncation(g, x, theta, spec.abs_tol);
    double kernel_err = 0.0;
    auto f = [&](double tau) {
        const auto k = kernel(tau, x);
        kernel_err = std::max(kernel_err, k.err_est);
        const double folded = std::exp(theta * tau) * g(tau) + std::exp(-theta * tau) * g(-tau);
        return k.value * folded;
    };
    const auto r = quad::integrate_interval_gk(f, 0.0, upper, spec, noise_floor);
    return {r.value, r.err_est + kernel_err * r.l1_norm + spec.abs_tol};
}

}  // namespace

double LebesgueParams::q() const {
    if (std::isinf(p)) return 1.0;
    if (p == 1.0) return kInfinity;
    return p / (p - 1.0);
}

void LebesgueParams::validate() const {
    if (!(p >= 1.0)) throw DomainError("LebesgueParams: p must be >= 1");
    if (!std::isfinite(nu)) throw DomainError("LebesgueParams: nu must be finite");
}

ComplexEvalResult mellin_numeric(const SampledFunction& f, ComplexScalar s,
                                 const QuadratureSpec& spec) {
    if (!f.eval) throw DomainError("mellin_numeric: empty function");
    if (!(s.real() + f.zero_exponent > 0.0))
        throw DivergenceError("mellin_numeric: integral diverges at 0 for this Re s");
    if (f.decay.kind == DecayKind::power && !(s.real() < f.decay.rate))
        throw DivergenceError("mellin_numeric: integral diverges at infinity for this Re s");
    const ComplexScalar e = s - 1.0;
    auto integrand = [&](double x) -> ComplexScalar {
        const double fx = f(x);
        if (fx == 0.0) return 0.0;
        return fx * std::exp(e * std::log(x));
    };
    const auto r = quad::integrate_semi_infinite(integrand, spec, f.decay);
    return {detail::require_finite(r.value, "mellin_numeric"), r.err_est};
}

std::vector<MellinSample> mellin_line(const SampledFunction& f, double re_s,
                                      const std::vector<double>& im_s) {
    std::vector<MellinSample> out;
    out.reserve(im_s.size());
    for (double t : im_s) {
        const ComplexScalar s(re_s, t);
        out.push_back({s, mellin_numeric(f, s).value});
    }
    return out;
}

EvalResult fourier_cosine(const std::function<double(double)>& f, double x, const Decay& decay,
                          const QuadratureSpec& spec) {
    if (!f) throw DomainError("fourier_cosine: empty function");
    auto integrand = [&](double t) { return f(t) * std::cos(x * t); };
    const auto r = quad::integrate_semi_infinite(integrand, spec, decay);
    return {kSqrt2OverPi * r.value, kSqrt2OverPi * r.err_est};
}

EvalResult forward_F(const SampledFunction& f, double tau, const QuadratureSpec& spec) {
    require_l0(f, "forward_F");
    auto integrand = [&](double x) {
        quad::Vec<double, 2> v;
        if (beyond_kernel_reach(x)) return v;
        const double fx = f(x);
        if (fx == 0.0) return v;
        const auto k = kernel::psi_auto(tau, x);
        v[0] = k.value * fx;
        v[1] = k.err_est * std::abs(fx);
        return v;
    };
    const auto r = quad::integrate_semi_infinite(integrand, spec, f.decay);
    return {detail::require_finite(r.value[0], "forward_F"), r.err_est + r.value[1]};
}

EvalResult forward_F_mellin(const std::function<ComplexScalar(ComplexScalar)>& fstar, double tau,
                            const quad::ContourSpec& contour, const QuadratureSpec& spec) {
    if (!fstar) throw DomainError("forward_F_mellin: empty Mellin transform");
    const double t = std::abs(tau);
    auto g = [&](ComplexScalar s) { return kernel::psi_mellin_density(t, s) * fstar(1.0 - s); };
    const quad::ContourDecay decay{0.5 * pi, 2.0 * contour.gamma - 1.5, t + 2.0};
    const auto r = quad::integrate_contour(g, contour, 1.0, spec, decay);
    const double scale = 1.0 / (8.0 * kSqrtPi);
    return {-scale * r.value.real(), scale * (r.err_est + std::abs(r.value.imag()))};
}

EvalResult meijer_k0(const SampledFunction& f, double x, const QuadratureSpec& spec) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("meijer_k0: requires x > 0");
    if (!f.eval) throw DomainError("meijer_k0: empty function");
    auto integrand = [&](double t) {
        quad::Vec<double, 2> v;
        const double ft = f(t);
        if (ft == 0.0 || beyond_kernel_reach(4.0 * x * t)) return v;
        const auto k = kernel::re_k0_rotated(x * t);
        v[0] = k.value * ft;
        v[1] = k.err_est * std::abs(ft);
        return v;
    };
    const auto r = quad::integrate_semi_infinite(integrand, spec, f.decay);
    return {-kSqrt2OverPi * r.value[0], kSqrt2OverPi * (r.err_est + r.value[1])};
}

EvalResult forward_F_composition(const SampledFunction& f, double tau) {
    require_l0(f, "forward_F_composition");
    // The inner transform at cosh t decays like e^{-2t}; the outer level
    // tolerance sits above the inner rounding noise.
    QuadratureSpec outer;
    outer.rel_tol = 1e-10;
    double inner_err = 0.0;
    auto profile = [&](double t) {
        const double y = std::cosh(t);
        if (!std::isfinite(y)) return 0.0;
        const auto m = meijer_k0(f, y);
        inner_err = std::max(inner_err, m.err_est);
        return m.value;
    };
    const auto r = fourier_cosine(profile, tau, Decay{DecayKind::exponential, 2.0}, outer);
    return {r.value, r.err_est + kSqrt2OverPi * inner_err};
}

double index_truncation(const SampledFunction& g, double x, double theta, double tol) {
    if (!(x > 0.0)) throw DomainError("index_truncation: requires x > 0");
    const double th = std::abs(theta);
    const double delta = std::min(std::max(1.2, 0.5 * (th + 0.5 * pi)), 0.5 * pi - 1e-3);
    const double kernel_scale = kernel::bound_delta_rhs(0.0, x, delta);
    const double margin = QuadratureSpec{}.truncation_margin;

    // Calibrate |g(tau)| <= C w(tau) from samples, w the declared decay.
    const Decay d = g.decay;
    auto log_w = [&](double t) {
        switch (d.kind) {
            case DecayKind::exponential: return -d.rate * t;
            case DecayKind::gaussian: return -d.rate * t * t;
            case DecayKind::sqrt_exponential: return -d.rate * std::sqrt(t);
            case DecayKind::power: return -d.rate * std::log1p(t);
        }
        return 0.0;
    };
    double c = 0.0;
    for (int i = 0; i <= 1600; ++i) {
        const double t = 0.025 * i;
        const double m = std::max(std::abs(g(t)), std::abs(g(-t)));
        if (m > 0.0) c = std::max(c, std::exp(std::log(m) - log_w(t)));
    }
    if (c == 0.0) return 1.0;

    // Neglected mass: 2 C kernel_scale int_T^inf e^{-(delta - theta) t} w(t) dt,
    // bounded by the integrand at T over its logarithmic slope there.
    auto tail = [&](double t) {
        double slope = delta - th;
        switch (d.kind) {
            case DecayKind::exponential: slope += d.rate; break;
            case DecayKind::gaussian: slope += 2.0 * d.rate * t; break;
            case DecayKind::sqrt_exponential: slope += 0.5 * d.rate / std::sqrt(t); break;
            case DecayKind::power: break;
        }
        if (!(slope > 0.0)) return kInfinity;
        return 2.0 * c * kernel_scale * std::exp(-(delta - th) * t + log_w(t)) / slope;
    };
    for (double t = 1.0; t <= 400.0; t += 0.25)
        if (margin * tail(t) <= tol) return t;
    throw TruncationError(
        "index_truncation: kernel decay e^{-delta |tau|} cannot dominate the weight; "
        "theta too close to the decay limit");
}

EvalResult adjoint_G_weighted(const SampledFunction& g, double x, double theta,
                              const QuadratureSpec& spec) {
    return index_integral(g, x, theta, spec,
                          [](double tau, double y) { return kernel::psi_auto(tau, y); });
}

EvalResult adjoint_G(const SampledFunction& g, double x, const QuadratureSpec& spec) {
    return adjoint_G_weighted(g, x, 0.0, spec);
}

EvalResult adjoint_G_derivative(const SampledFunction& g, double x) {
    QuadratureSpec spec;
    spec.rel_tol = 1e-10;
    // Near x = 0 the derivative kernel grows like 1/x and oscillates in
    // tau, so the integral cancels far below int |integrand|; the contour
    // route resolves the kernel to about 1e-11 relative.
    constexpr double kKernelNoise = 1e-11;
    return index_integral(
        g, x, 0.0, spec,
        [spec](double tau, double y) -> EvalResult {
            const auto d = kernel::psi_derivative_x(tau, y, 1, {}, spec);
            return {d.value, d.err_est};
        },
        kKernelNoise);
}

namespace {

// -2 sqrt(2/pi) int_0^inf k(x cosh t) c(t) dt for a kernel k bounded by
// kernel_growth(y) K_0(2 sqrt(2y)).
EvalResult fourier_route(const std::function<double(double)>& cosine_part, double x,
                         const std::function<EvalResult(double)>& k,
                         const std::function<double(double)>& kernel_growth) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("adjoint_G_fourier_route: requires x > 0");
    const QuadratureSpec spec;
    double sup = 0.0;
    for (int i = 0; i <= 400; ++i) sup = std::max(sup, std::abs(cosine_part(0.1 * i)));
    const double tail = 1e-3 * spec.abs_tol / spec.truncation_margin;
    double upper = kernel::rotated_k0_cutoff(x, tail / std::max(sup, 1e-300));
    for (int pass = 0; pass < 2; ++pass) {
        const double growth = std::max(1.0, kernel_growth(x * std::cosh(upper)));
        upper = kernel::rotated_k0_cutoff(x, tail / (growth * std::max(sup, 1e-300)));
    }
    double kernel_err = 0.0;
    auto integrand = [&](double t) {
        const auto kv = k(x * std::cosh(t));
        kernel_err = std::max(kernel_err, kv.err_est);
        return kv.value * cosine_part(t);
    };
    const auto r = quad::integrate_interval_gk(integrand, 0.0, upper, spec);
    const double scale = 2.0 * kSqrt2OverPi;
    return {-scale * r.value,
            scale * (r.err_est + kernel_err * sup * upper + spec.truncation_margin * tail)};
}

EvalResult fourier_route(const std::function<double(double)>& cosine_part, double x) {
    return fourier_route(cosine_part, x, kernel::re_k0_rotated, [](double) { return 1.0; });
}

// d/dx Re K_0(4 e^{i pi/4} sqrt(x cosh t)) = -Re(w K_1(w)) / (2x), w = 4 e^{i pi/4} sqrt(x cosh t).
EvalResult fourier_route_derivative(const std::function<double(double)>& cosine_part, double x) {
    auto k = [x](double y) -> EvalResult {
        const ComplexScalar w = 4.0 * std::polar(1.0, 0.25 * pi) * std::sqrt(y);
        const auto k1 = specfun::macdonald_complex_arg(1.0, w);
        return {-(w * k1.value).real() / (2.0 * x), std::abs(w) * k1.err_est / (2.0 * x)};
    };
    // |w K_1(w)| <= (1 + |w|) K_0-type envelope
    auto growth = [x](double y) { return (1.0 + 4.0 * std::sqrt(y)) / (2.0 * x); };
    return fourier_route(cosine_part, x, k, growth);
}

std::function<double(double)> folded_cosine_part(const SampledFunction& g) {
    // (1/sqrt(2 pi)) int_R g(tau) cos(t tau) dtau, the part of the Fourier
    // transform that survives against the even K_0 factor.
    // Folded onto [0, inf) so a kink of g at 0 sits on the endpoint.
    return [g](double t) {
        auto even = [&](double tau) { return g(tau) + g(-tau); };
        return 0.5 * fourier_cosine(even, t, g.decay).value;
    };
}

}  // namespace

EvalResult adjoint_G_fourier_route(const SampledFunction& g, double x) {
    if (!g.eval) throw DomainError("adjoint_G_fourier_route: empty function");
    return fourier_route(folded_cosine_part(g), x);
}

EvalResult adjoint_G_fourier_route(const std::function<double(double)>& fourier_g, double x) {
    if (!fourier_g) throw DomainError("adjoint_G_fourier_route: empty function");
    return fourier_route(fourier_g, x);
}

EvalResult adjoint_G_derivative_fourier_route(const SampledFunction& g, double x) {
    if (!g.eval) throw DomainError("adjoint_G_derivative_fourier_route: empty function");
    return fourier_route_derivative(folded_cosine_part(g), x);
}

EvalResult adjoint_G_derivative_fourier_route(const std::function<double(double)>& fourier_g, double x) {
    if (!fourier_g) throw DomainError("adjoint_G_derivative_fourier_route: empty function");
    return fourier_route_derivative(fourier_g, x);
}

namespace {

// Memo of h(tau) within one inversion, keyed by the exact abscissa.
class TauCache {
public:
    explicit TauCache(std::function<double(double)> fn) : fn_(std::move(fn)) {}
    double operator()(double t) {
        auto it = values_.find(t);
        if (it != values_.end()) return it->second;
        const double v = fn_(t);
        values_.emplace(t, v);
        return v;
    }

private:
    std::function<double(double)> fn_;
    std::unordered_map<double, double> values_;
};

double scan_truncation(TauCache& h, double tol) {
    for (double t = 2.0; t <= 200.0; t += 1.0)
        if (std::abs(h(t)) < tol && std::abs(h(t - 0.5)) < tol && std::abs(h(t + 0.5)) < tol)
            return t;
    throw TruncationError("invert_F: integrand envelope never drops below the tolerance");
}

}  // namespace

InversionResult invert_F(const std::function<double(double)>& Fvals, double x,
                         const InversionOptions& options) {
    if (!Fvals) throw DomainError("invert_F: empty transform");
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("invert_F: requires x > 0");
    const auto contour = options.contour;
    auto weight = [&](double tau) {
        if (tau == 0.0) return 0.0;
        return tau * Fvals(tau) / std::cosh(0.5 * pi * tau);
    };
    TauCache h([&](double tau) {
        const double w = weight(tau);
        if (w == 0.0) return 0.0;
        return w * kernel::phi_derivative_x(tau, x, contour).value;
    });
    const double upper = scan_truncation(h, options.envelope_tol);

    QuadratureSpec spec;
    spec.rel_tol = 1e-10;
    spec.abs_tol = 1e-14;
    QuadratureSpec loose = spec;
    loose.rel_tol = 1e-6;
    loose.abs_tol = 1e-16;
    auto hf = [&](double t) { return h(t); };
    auto habs = [&](double t) { return std::abs(h(t)); };
    const double mass = quad::integrate_interval_gk(habs, 0.0, upper, loose).value;
    const double tail = quad::integrate_interval_gk(habs, upper, 2.0 * upper, loose).value;

    InversionResult out;
    out.truncation = upper;
    out.tail_mass = mass > 0.0 ? tail / mass : 0.0;
    if (out.tail_mass > options.tail_tol)
        throw TruncationError("invert_F: tau-tail mass " + std::to_string(out.tail_mass) +
                              " exceeds tolerance");

    if (options.mode == InversionMode::contour_derivative) {
        const auto r = quad::integrate_interval_gk(hf, 0.0, upper, spec);
        out.value = -(4.0 / pi) * r.value;
        out.err_est = (4.0 / pi) * (r.err_est + tail);
        return out;
    }

    // Outer central difference of the undifferentiated integral.
    const double step = 1e-4 * std::max(x, 1.0);
    QuadratureSpec tight = spec;
    tight.rel_tol = 1e-13;
    tight.abs_tol = 1e-18;
    auto integral_at = [&](double y) {
        auto f = [&](double tau) {
            const double w = weight(tau);
            return w == 0.0 ? 0.0 : w * kernel::phi_direct(tau, y).value;
        };
        return quad::integrate_interval_gk(f, 0.0, upper, tight);
    };
    const auto plus = integral_at(x + step);
    const auto minus = integral_at(x - step);
    out.value = -(4.0 / pi) * (plus.value - minus.value) / (2.0 * step);
    out.err_est = (4.0 / pi) * ((plus.err_est + minus.err_est) / (2.0 * step) + tail);
    return out;
}

InversionResult invert_F(const std::function<double(double)>& Fvals, double x,
                         const quad::ContourSpec& contour) {
    InversionOptions options;
    options.contour = contour;
    return invert_F(Fvals, x, options);
}

EvalResult invert_G(const std::function<double(double)>& Gprime, double x,
                    const QuadratureSpec& spec) {
    if (!Gprime) throw DomainError("invert_G: empty derivative");
    if (!std::isfinite(x)) throw DomainError("invert_G: requires finite x");
    if (x == 0.0) return {0.0, 0.0};
    const double order = std::abs(x);
    // Phi_x and G' stay bounded as y -> 0, so [0, kNearZero] is replaced by
    // its size bound; below it G' would need tau-resolution of cos(tau log y).
    constexpr double kNearZero = 1e-12;
    auto integrand = [&](double y) {
        quad::Vec<double, 2> v;
        if (y < kNearZero || beyond_kernel_reach(y)) return v;
        const auto phi = kernel::phi_direct(order, y);
        const double gp = Gprime(y);
        v[0] = phi.value * gp;
        v[1] = phi.err_est * std::abs(gp);
        return v;
    };
    QuadratureSpec s = spec;
    s.rel_tol = std::max(spec.rel_tol, 1e-10);
    const auto r = quad::integrate_semi_infinite(integrand, s,
                                                 Decay{DecayKind::sqrt_exponential, 4.0});
    const double near_zero =
        2.0 * kNearZero * std::abs(kernel::phi_direct(order, kNearZero).value * Gprime(kNearZero));
    const double prefactor = (4.0 / pi) * order * std::sinh(0.5 * pi * order);
    return {prefactor * r.value[0], prefactor * (r.err_est + r.value[1] + near_zero)};
}

double norm_L0(const SampledFunction& f) {
    require_l0(f, "norm_L0");
    return integrate_abs_power(f.eval, k0_squared, 1.0, f.decay, QuadratureSpec{}).value;
}

double norm_nu_p(const SampledFunction& f, const LebesgueParams& params) {
    params.validate();
    if (!f.eval) throw DomainError("norm_nu_p: empty function");
    const double nu = params.nu;
    if (std::isinf(params.p)) {
        double m = 0.0;
        for (double x : log_grid(1e-10, 10.0 * decay_horizon(f.decay), 10000))
            m = std::max(m, std::abs(std::pow(x, nu) * f(x)));
        return m;
    }
    if (!(nu + f.zero_exponent > 0.0))
        throw DivergenceError("norm_nu_p: x^{nu p - 1} |f|^p is not integrable at 0");
    if (f.decay.kind == DecayKind::power && !(nu < f.decay.rate))
        throw DivergenceError("norm_nu_p: x^{nu p - 1} |f|^p is not integrable at infinity");
    const double p = params.p;
    auto weight = [nu, p](double x) { return std::pow(x, nu * p - 1.0); };
    const auto r = integrate_abs_power(f.eval, weight, p, f.decay, QuadratureSpec{});
    return std::pow(r.value, 1.0 / p);
}

double norm_index_p(const SampledFunction& g, double p) {
    if (!g.eval) throw DomainError("norm_index_p: empty function");
    if (!(p >= 1.0) || std::isinf(p)) throw DomainError("norm_index_p: requires 1 <= p < inf");
    const auto r = integrate_abs_power_line(g.eval, p, g.decay, QuadratureSpec{});
    return std::pow(r.value, 1.0 / p);
}

double embedding_constant(const LebesgueParams& params) {
    params.validate();
    const double nu = params.nu;
    if (!(nu < 1.0)) throw DomainError("embedding_constant: requires nu < 1");
    if (params.p == 1.0) {
        double m = 0.0;
        for (double x : log_grid(1e-12, 2e3, 10000)) m = std::max(m, k0_squared(x) * std::pow(x, 1.0 - nu));
        return m;
    }
    const double q = params.q();
    const double inv_p = std::isinf(params.p) ? 0.0 : 1.0 / params.p;
    const double inner = std::pow(std::tgamma(2.0 * q * (1.0 - nu)), 1.0 / q) /
                         std::pow(2.0 * q, 2.0 * (1.0 - nu)) *
                         specfun::beta(1.0 - nu, 1.0 - nu);
    return std::pow(2.0, -2.0 * (inv_p + nu)) * inner * inner;
}

double forward_lp_constant(const LebesgueParams& params) {
    params.validate();
    const double nu = params.nu;
    if (!(nu < 1.0) || !(params.p >= 2.0) || std::isinf(params.p))
        throw DomainError("forward_lp_constant: requires nu < 1 and 2 <= p < inf");
    const double p = params.p;
    const double q = params.q();
    return 0.5 * std::pow(pi, 1.0 / p - 1.0) * std::pow(q, 2.0 * (nu - 1.0)) *
           std::pow(std::tgamma(q * (1.0 - nu)), 2.0 / q) * specfun::beta(1.0 - nu, 1.0 - nu);
}

double adjoint_pointwise_constant(double p, double x) {
    if (!(p > 1.0 && p <= 2.0)) throw DomainError("adjoint_pointwise_constant: requires 1 < p <= 2");
    if (!(x > 0.0)) throw DomainError("adjoint_pointwise_constant: requires x > 0");
    const double a = 1.0 / (4.0 * p);
    return std::pow(2.0, a - 1.0) * std::pow(p, -0.5 / p) * std::pow(x, -a) * specfun::beta(a, a);
}

double adjoint_weighted_constant(double nu, double p, double r) {
    if (!(nu > 0.0) || !(p > 1.0 && p <= 2.0) || !(r >= 1.0))
        throw DomainError("adjoint_weighted_constant: requires nu > 0, 1 < p <= 2, r >= 1");
    const double q = p / (p - 1.0);
    return std::pow(2.0, nu - 1.0 + 1.0 / r - 2.0 / p) * std::pow(pi, 1.0 / q - 1.0) *
           std::pow(std::tgamma(2.0 * nu * r), 1.0 / r) * std::pow(std::tgamma(nu * p), 2.0 / p) /
           (std::pow(r, 2.0 * nu) * std::pow(std::tgamma(2.0 * nu * p), 1.0 / p)) *
           specfun::beta(nu, nu);
}

std::vector<InequalityReport> bound_report(const BoundRequest& req) {
    const auto& f = req.fn;
    const auto& lp = req.params;
    lp.validate();
    std::vector<InequalityReport> out;
    auto push = [&](std::string name, double lhs, double rhs,
                    std::vector<std::pair<std::string, double>> params) {
        out.push_back({std::move(name), lhs, rhs, lhs <= rhs * (1.0 + 1e-10), std::move(params)});
    };
    switch (req.selector) {
        case BoundSelector::embedding: {
            if (!(lp.nu < 1.0)) throw DomainError("bound_report: embedding requires nu < 1");
            const double rhs = embedding_constant(lp) * norm_nu_p(f, lp);
            push("embedding", norm_L0(f), rhs, {{"nu", lp.nu}, {"p", lp.p}});
            break;
        }
        case BoundSelector::forward_lp: {
            const double c = forward_lp_constant(lp);
            const double upper = req.nodes.empty() ? 20.0 : req.nodes.back();
            QuadratureSpec loose;
            loose.rel_tol = 1e-8;
            auto integrand = [&](double tau) {
                return std::pow(std::abs(forward_F(f, tau).value), lp.p);
            };
            const double half = quad::integrate_interval_gk(integrand, 0.0, upper, loose).value;
            const double lhs = std::pow(2.0 * half, 1.0 / lp.p);
            push("forward_lp", lhs, c * norm_nu_p(f, lp),
                 {{"nu", lp.nu}, {"p", lp.p}, {"tau_max", upper}});
            break;
        }
        case BoundSelector::forward_sup: {
            const double rhs = (4.0 / pi) * norm_L0(f);
            for (double tau : req.nodes)
                push("forward_sup", std::abs(forward_F(f, tau).value), rhs, {{"tau", tau}});
            break;
        }
        case BoundSelector::adjoint_pointwise: {
            const double gnorm = norm_index_p(f, lp.p);
            for (double x : req.nodes)
                push("adjoint_pointwise", std::abs(adjoint_G(f, x).value),
                     adjoint_pointwise_constant(lp.p, x) * gnorm, {{"p", lp.p}, {"x", x}});
            break;
        }
        case BoundSelector::adjoint_weighted: {
            const double c = adjoint_weighted_constant(lp.nu, lp.p, req.r);
            SampledFunction image;
            image.eval = memoize([&f](double x) { return adjoint_G(f, x).value; });
            image.zero_exponent = 0.0;
            image.decay = Decay{DecayKind::sqrt_exponential, 2.0};
            const double lhs = norm_nu_p(image, {lp.nu, req.r});
            push("adjoint_weighted", lhs, c * norm_index_p(f, lp.p),
                 {{"nu", lp.nu}, {"p", lp.p}, {"r", req.r}});
            break;
        }
    }
    return out;
}

HilbertSchmidtReport hilbert_schmidt_diagnostic(const LebesgueParams& params, double trunc) {
    params.validate();
    if (!(params.p > 1.0 && params.p <= 2.0) || !(params.nu < 1.0))
        throw DomainError("hilbert_schmidt_diagnostic: requires 1 < p <= 2 and nu < 1");
    if (!(trunc > 0.0)) throw DomainError("hilbert_schmidt_diagnostic: requires trunc > 0");
    const double q = params.q();
    const double nu = params.nu;
    const double expo = (1.0 - nu) * q - 1.0;
    auto weight = [expo](double x) { return std::pow(x, expo); };
    const Decay decay{DecayKind::sqrt_exponential, 2.0 * std::sqrt(2.0) * q};

    QuadratureSpec spec;
    spec.rel_tol = 1e-9;
    auto inner = [&](double tau) {
        auto core = [tau](double x) {
            return beyond_kernel_reach(x) ? 0.0 : kernel::psi_auto(tau, x).value;
        };
        return integrate_abs_power(core, weight, q, decay, spec).value;
    };
    QuadratureSpec outer;
    outer.rel_tol = 1e-8;
    const auto r = quad::integrate_interval_gk(inner, 0.0, trunc, outer);

    // Tail: |Psi| <= (4/pi) e^{-delta tau} K_0^2(c sqrt(2x)), c = cos(delta/2) sqrt(cos delta).
    constexpr double kDelta = 1.2;
    const double c = std::cos(0.5 * kDelta) * std::sqrt(std::cos(kDelta));
    auto envelope = [&](double x) {
        const double k = specfun::macdonald_imag_order(0.0, c * std::sqrt(2.0 * x)).value;
        return std::pow(k, 2.0 * q) * std::pow(x, expo);
    };
    const double mass = quad::integrate_semi_infinite(envelope, spec, decay).value;
    HilbertSchmidtReport rep;
    rep.trunc = trunc;
    rep.truncated = 2.0 * r.value;
    rep.err_est = 2.0 * r.err_est;
    rep.tail_bound = 2.0 * std::pow(4.0 / pi, q) * std::exp(-kDelta * q * trunc) / (kDelta * q) * mass;
    return rep;
}

TransformResult evaluate_grid(const std::vector<double>& abscissae, int jobs, std::string route,
                              const std::function<EvalResult(double)>& fn) {
    TransformResult out;
    out.route = std::move(route);
    const auto values =
        parallel_map(abscissae.size(), jobs, [&](std::size_t i) { return fn(abscissae[i]); });
    out.grid.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        out.grid.push_back({abscissae[i], values[i].value, values[i].err_est});
    return out;
}

std::function<double(double)> memoize(std::function<double(double)> fn) {
    struct State {
        std::function<double(double)> fn;
        std::mutex mutex;
        std::unordered_map<double, double> values;
    };
    auto state = std::make_shared<State>();
    state->fn = std::move(fn);
    return [state](double x) {
        {
            std::lock_guard<std::mutex> lock(state->mutex);
            auto it = state->values.find(x);
            if (it != state->values.end()) return it->second;
        }
        const double v = state->fn(x);
        std::lock_guard<std::mutex> lock(state->mutex);
        state->values.emplace(x, v);
        return v;
    };
}

namespace canonical {

SampledFunction zero_mean() {
    return {[](double x) { return (1.0 - x) * std::exp(-x); }, 0.0,
            Decay{DecayKind::exponential, 0.9}};
}

ComplexScalar zero_mean_mellin(ComplexScalar s) { return specfun::gamma(s) * (1.0 - s); }

SampledFunction two_exponentials() {
    return {[](double x) { return std::exp(-x) - 2.0 * std::exp(-2.0 * x); }, 0.0,
            Decay{DecayKind::exponential, 0.9}};
}

ComplexScalar two_exponentials_mellin(ComplexScalar s) {
    return specfun::gamma(s) * (1.0 - std::exp((1.0 - s) * std::log(2.0)));
}

SampledFunction gaussian_index() {
    return {[](double t) { return t * t * std::exp(-t * t); }, 2.0,
            Decay{DecayKind::gaussian, 0.9}};
}

double gaussian_index_fourier(double t) {
    return std::exp(-0.25 * t * t) * (0.5 - 0.25 * t * t) / std::sqrt(2.0);
}

SampledFunction slow_index() {
    return {[](double t) { return t * t * std::exp(-std::abs(t)); }, 2.0,
            Decay{DecayKind::exponential, 0.9}};
}

}  // namespace canonical

}  // namespace ixt::transforms
