#include "doctest.h"

#include <cmath>

#include "ixt/quadrature.hpp"
#include "ixt/specfun.hpp"

using namespace ixt;
using namespace ixt::quad;

TEST_CASE("spec validation") {
    QuadratureSpec q;
    q.max_levels = 2;
    CHECK_THROWS_AS(q.validate(), DomainError);
    q.max_levels = 21;
    CHECK_THROWS_AS(q.validate(), DomainError);
    q = {};
    q.rel_tol = 0.0;
    CHECK_THROWS_AS(q.validate(), DomainError);
    ContourSpec c;
    c.gamma = 0.0;
    CHECK_THROWS_AS(c.validate(), DomainError);
}

TEST_CASE("semi-infinite basics") {
    const auto r = integrate_semi_infinite([](double x) { return std::exp(-x); });
    CHECK(std::abs(r.value - 1.0) < 1e-14);
    CHECK(r.err_est <= 1e-12);
    const auto s = integrate_semi_infinite([](double x) { return std::exp(-x) / std::sqrt(x); });
    CHECK(std::abs(s.value - std::sqrt(pi)) < 1e-13);
}

TEST_CASE("semi-infinite exactness for polynomial times exponential") {
    for (int n = 0; n <= 10; ++n) {
        const auto r = integrate_semi_infinite(
            [n](double x) { return std::pow(x, n) * std::exp(-x); });
        const double expect = std::tgamma(n + 1.0);
        CHECK(std::abs(r.value - expect) <= 1e-12 * expect);
    }
}

TEST_CASE("logarithmic-squared endpoint: K0^2 weight mass") {
    auto k0sq = [](double x) {
        const double k = specfun::macdonald_imag_order(0.0, std::sqrt(2.0 * x)).value;
        return k * k;
    };
    const auto r = integrate_semi_infinite(k0sq, {}, Decay{DecayKind::sqrt_exponential, 2.0});
    CHECK(std::abs(r.value - 0.5) < 1e-12);
}

TEST_CASE("real line") {
    const auto g = integrate_real_line([](double t) { return std::exp(-t * t); });
    CHECK(std::abs(g.value - std::sqrt(pi)) < 1e-14);
    const auto s = integrate_real_line(
        [](double t) { return std::exp(-t * t) / std::cosh(0.5 * pi * t); });
    CHECK(std::abs(s.value - 1.255945269426646394451) < 1e-13);
    const auto odd = integrate_real_line([](double t) { return t * std::exp(-t * t); });
    CHECK(std::abs(odd.value) <= 1e-15);
}

TEST_CASE("finite interval rules") {
    const auto a = integrate_interval([](double x) { return std::log(x); }, 0.0, 1.0);
    CHECK(std::abs(a.value + 1.0) < 1e-13);
    const auto b = integrate_interval_gk([](double x) { return std::sin(x); }, 0.0, pi);
    CHECK(std::abs(b.value - 2.0) < 1e-13);
    CHECK_THROWS_AS(integrate_interval([](double) { return 1.0; }, 1.0, 1.0), DomainError);
}

TEST_CASE("vector-valued integrand shares one sweep") {
    auto f = [](double x) {
        Vec<double, 3> v;
        v[0] = std::exp(-x);
        v[1] = x * std::exp(-x);
        v[2] = x * x * std::exp(-x);
        return v;
    };
    const auto r = integrate_semi_infinite(f);
    CHECK(std::abs(r.value[0] - 1.0) < 1e-13);
    CHECK(std::abs(r.value[1] - 1.0) < 1e-13);
    CHECK(std::abs(r.value[2] - 2.0) < 1e-13);
}

TEST_CASE("no convergence carries the last two levels") {
    QuadratureSpec q;
    q.max_levels = 3;
    q.rel_tol = 1e-15;
    q.abs_tol = 1e-300;
    try {
        integrate_interval([](double x) { return std::sin(200.0 * x); }, 0.0, 10.0, q);
        FAIL("expected NoConvergenceError");
    } catch (const NoConvergenceError& e) {
        CHECK(std::isfinite(e.previous()));
        CHECK(std::isfinite(e.last()));
    }
}

TEST_CASE("contour: Mellin inversion of exp(-x)") {
    ContourSpec c;
    c.gamma = 1.0;
    auto g = [](ComplexScalar s) { return specfun::gamma(s); };
    for (double x : {1.0, 2.0}) {
        const auto r = integrate_contour(g, c, x);
        CHECK(std::abs(r.value.real() - std::exp(-x)) < 1e-13);
        CHECK(std::abs(r.value.imag()) <= 10.0 * QuadratureSpec{}.abs_tol);
    }
}

TEST_CASE("contour: explicit height too small is rejected") {
    ContourSpec c;
    c.gamma = 1.0;
    c.height = 3.0;
    auto g = [](ComplexScalar s) { return specfun::gamma(s); };
    CHECK_THROWS_AS(integrate_contour(g, c, 1.0), TruncationError);
    CHECK_THROWS_AS(integrate_contour(g, ContourSpec{}, 0.0), DomainError);
}

TEST_CASE("contour: refinement never inflates err_est beyond the margin") {
    auto g = [](ComplexScalar s) { return specfun::gamma(s); };
    QuadratureSpec q;
    ContourSpec c;
    c.gamma = 0.5;
    const auto base = integrate_contour(g, c, 1.5, q);
    ContourSpec c2 = c;
    c2.nodes_per_unit *= 2;
    QuadratureSpec q2 = q;
    q2.max_levels = 20;
    for (const auto& r : {integrate_contour(g, c2, 1.5, q), integrate_contour(g, c, 1.5, q2)})
        CHECK(r.err_est <= q.truncation_margin * base.err_est);
}
