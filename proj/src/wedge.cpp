#include "ixt/wedge.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "ixt/kernel.hpp"
#include "ixt/transforms.hpp"

namespace ixt::wedge {
namespace {

using quad::DecayKind;

struct Terms {
    double fourth = 0.0;  // r^2 u_rrrr
    double third = 0.0;   // 5 r u_rrr
    double second = 0.0;  // 4 u_rr
    double mixed = 0.0;   // u_rrthth
    double zeroth = 0.0;  // 16 u
};

ResidualReport report(const Terms& t, ResidualMode mode, double h) {
    ResidualReport rep;
    rep.mode = mode;
    rep.h = h;
    rep.scale = std::max({std::abs(t.fourth), std::abs(t.third), std::abs(t.second),
                          std::abs(t.mixed), std::abs(t.zeroth)});
    const double sum = t.fourth + t.third + t.second + t.mixed + t.zeroth;
    rep.residual = rep.scale > 0.0 ? std::abs(sum) / rep.scale : 0.0;
    return rep;
}

Terms semi_analytic_terms(const WedgeParams& params, const PolarPoint& pt) {
    const auto& g = params.g;
    const double r = pt.r;
    const double theta = pt.theta;
    // The kernel derivatives decay in tau like the kernel itself up to
    // powers of tau; two extra units cover the tau^2 factor.
    const double upper = transforms::index_truncation(g, r, theta, 1e-15) + 2.0;
    quad::QuadratureSpec spec;
    spec.rel_tol = 1e-11;
    auto integrand = [&](double tau) {
        quad::Vec<double, 5> v;
        const double w = std::exp(theta * tau) * g(tau) + std::exp(-theta * tau) * g(-tau);
        if (w == 0.0) return v;
        const auto d = kernel::psi_derivatives(tau, r);
        v[0] = d[4].value * w;
        v[1] = d[3].value * w;
        v[2] = d[2].value * w;
        v[3] = tau * tau * d[2].value * w;
        v[4] = d[0].value * w;
        return v;
    };
    const auto res = quad::integrate_interval(integrand, 0.0, upper, spec);
    Terms t;
    t.fourth = r * r * res.value[0];
    t.third = 5.0 * r * res.value[1];
    t.second = 4.0 * res.value[2];
    t.mixed = res.value[3];
    t.zeroth = 16.0 * res.value[4];
    return t;
}

// Five-point central differences; the r-derivatives of order 3 and 4 are
// second order in h, the rest fourth order.
struct Stencil {
    std::array<std::array<double, 5>, 5> u{};  // u[i][j] at (r + (i-2)h, theta + (j-2)h)
    double h = 0.0;

    double d2(const std::array<double, 5>& f) const {
        return (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h);
    }
    double d3(const std::array<double, 5>& f) const {
        return (-f[0] + 2.0 * f[1] - 2.0 * f[3] + f[4]) / (2.0 * h * h * h);
    }
    double d4(const std::array<double, 5>& f) const {
        return (f[0] - 4.0 * f[1] + 6.0 * f[2] - 4.0 * f[3] + f[4]) / (h * h * h * h);
    }
    std::array<double, 5> r_line(int j) const {
        return {u[0][j], u[1][j], u[2][j], u[3][j], u[4][j]};
    }
};

Stencil sample(const WedgeParams& params, const PolarPoint& pt, double h) {
    Stencil s;
    s.h = h;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            s.u[i][j] = wedge_u(params, {pt.r + (i - 2) * h, pt.theta + (j - 2) * h}).value;
    return s;
}

Terms difference_terms(const Stencil& s, double r) {
    Terms t;
    const auto line = s.r_line(2);
    t.fourth = r * r * s.d4(line);
    t.third = 5.0 * r * s.d3(line);
    t.second = 4.0 * s.d2(line);
    std::array<double, 5> urr{};
    for (int j = 0; j < 5; ++j) urr[j] = s.d2(s.r_line(j));
    t.mixed = s.d2(urr);
    t.zeroth = 16.0 * s.u[2][2];
    return t;
}

}  // namespace

void WedgeParams::validate() const {
    if (!(beta > 0.0 && beta < 2.0 * pi)) throw DomainError("WedgeParams: beta must lie in (0, 2 pi)");
    if (!g.eval) throw DomainError("WedgeParams: empty g");
    // int |g| e^{beta |tau|} dtau is finite only if the declared decay beats
    // e^{beta |tau|}.
    const auto& d = g.decay;
    const bool integrable = (d.kind == DecayKind::gaussian && d.rate > 0.0) ||
                            (d.kind == DecayKind::exponential && d.rate > beta);
    if (!integrable)
        throw DomainError("WedgeParams: g e^{beta |tau|} is not integrable per its decay metadata");
}

void PolarPoint::validate(const WedgeParams& params) const {
    if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("PolarPoint: r must be > 0");
    if (!(theta >= 0.0 && theta < params.beta))
        throw DomainError("PolarPoint: theta must lie in [0, beta)");
}

EvalResult wedge_u(const WedgeParams& params, const PolarPoint& pt) {
    params.validate();
    pt.validate(params);
    return transforms::adjoint_G_weighted(params.g, pt.r, pt.theta);
}

ResidualReport pde_residual(const WedgeParams& params, const PolarPoint& pt, double h,
                            ResidualMode mode) {
    params.validate();
    pt.validate(params);
    if (mode == ResidualMode::semi_analytic) return report(semi_analytic_terms(params, pt), mode, h);

    if (!(h > 0.0)) throw DomainError("pde_residual: h must be > 0");
    if (!(pt.r - 2.0 * h > 0.0) || !(pt.theta - 2.0 * h >= 0.0) ||
        !(pt.theta + 2.0 * h < params.beta))
        throw DomainError("pde_residual: 5x5 stencil leaves the wedge");
    const Terms coarse = difference_terms(sample(params, pt, h), pt.r);
    const Terms fine = difference_terms(sample(params, pt, 0.5 * h), pt.r);
    // One Richardson step against the leading h^2 error.
    auto extrapolate = [](double c, double f) { return (4.0 * f - c) / 3.0; };
    Terms t;
    t.fourth = extrapolate(coarse.fourth, fine.fourth);
    t.third = extrapolate(coarse.third, fine.third);
    t.second = extrapolate(coarse.second, fine.second);
    t.mixed = extrapolate(coarse.mixed, fine.mixed);
    t.zeroth = fine.zeroth;
    return report(t, mode, h);
}

double initial_condition_check(const WedgeParams& params, const std::vector<double>& r_nodes,
                               InitialMode mode) {
    params.validate();
    double worst = 0.0;
    for (double r : r_nodes) {
        if (!(r > 0.0)) throw DomainError("initial_condition_check: nodes must be > 0");
        const double u = wedge_u(params, {r, 0.0}).value;
        const double ref = mode == InitialMode::same_path
                               ? transforms::adjoint_G(params.g, r).value
                               : transforms::adjoint_G_fourier_route(params.g, r).value;
        worst = std::max(worst, std::abs(u - ref));
    }
    return worst;
}

double decay_ratio(const WedgeParams& params, double theta, double near, double far) {
    const double u_near = wedge_u(params, {near, theta}).value;
    const double u_far = wedge_u(params, {far, theta}).value;
    if (u_near == 0.0) throw DomainError("decay_ratio: u vanishes at the near radius");
    return std::abs(u_far) / std::abs(u_near);
}

}  // namespace ixt::wedge
