#include "doctest.h"

#include <cmath>

#include "ixt/kernel.hpp"

using namespace ixt;
using namespace ixt::kernel;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// 30-digit reference values (independent arbitrary-precision evaluation).
constexpr double kPsi_1_1 = 0.016109046938613418;
constexpr double kPsi_half_quarter = 0.065804729078390713;
constexpr double kPsi_1_small = -0.047219413669000025;     // tau = 1, x = 1e-3
constexpr double kPsi_taumin_1 = 0.018155860713651428;     // tau = 1e-3, x = 1
constexpr double kReK0Rot_1 = -0.036178847899547611;
constexpr double kReK0Rot_02 = -0.012825224048829821;
constexpr double kIdentityRhs = 0.028736248147034870;      // x = 1, u = 0.5

}  // namespace

TEST_CASE("route names round trip") {
    for (auto r : {Route::direct, Route::fourier, Route::mellin_barnes})
        CHECK(parse_route(route_name(r)) == r);
    CHECK(parse_route("mb") == Route::mellin_barnes);
    CHECK_THROWS_AS(parse_route("laplace"), DomainError);
}

TEST_CASE("psi against reference values") {
    CHECK(rel(psi_direct(1, 1).value, kPsi_1_1) < 1e-13);
    CHECK(rel(psi_fourier(1, 1).value, kPsi_1_1) < 1e-12);
    CHECK(rel(psi_mellin_barnes(1, 1).value, kPsi_1_1) < 1e-10);
    CHECK(rel(psi_direct(0.5, 0.25).value, kPsi_half_quarter) < 1e-13);
    CHECK(rel(psi_auto(1, 1e-3).value, kPsi_1_small) < 1e-11);
    CHECK(rel(psi_fourier(1e-3, 1).value, kPsi_taumin_1) < 1e-12);
}

TEST_CASE("direct route refuses small tau") {
    CHECK_THROWS_AS(psi_direct(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(psi_direct(5e-4, 1.0), DomainError);
    CHECK_NOTHROW(psi_auto(0.0, 1.0));
}

TEST_CASE("kernel is even in tau") {
    for (double x : {0.25, 1.0, 4.0}) {
        CHECK(psi_direct(-1.5, x).value == psi_direct(1.5, x).value);
        CHECK(std::abs(psi_fourier(-1.5, x).value - psi_fourier(1.5, x).value) < 1e-15);
        CHECK(std::abs(psi_mellin_barnes(-1.5, x).value - psi_mellin_barnes(1.5, x).value) < 1e-15);
    }
}

TEST_CASE("x must be positive") {
    CHECK_THROWS_AS(psi_direct(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(psi_direct(1.0, -1.0), DomainError);
}

TEST_CASE("three routes agree on the acceptance grid") {
    for (double tau : {0.5, 1.0, 2.0, 4.0}) {
        for (double x : {0.25, 1.0, 4.0}) {
            const double d = psi_direct(tau, x).value;
            const double f = psi_fourier(tau, x).value;
            const double m = psi_mellin_barnes(tau, x).value;
            const double s = std::max(std::abs(d), 1e-300);
            CHECK(std::abs(d - f) / s <= 1e-8);
            CHECK(std::abs(d - m) / s <= 1e-6);
        }
    }
}

TEST_CASE("error estimates cover the reference error") {
    const auto f = psi_fourier(1, 1);
    CHECK(std::abs(f.value - kPsi_1_1) <= f.err_est + 4e-17);
    const auto m = psi_mellin_barnes(1, 1);
    CHECK(std::abs(m.value - kPsi_1_1) <= m.err_est + 4e-17);
    CHECK(m.imag_residue < 1e-12);
}

TEST_CASE("rotated K0 building block") {
    CHECK(rel(re_k0_rotated(1.0).value, kReK0Rot_1) < 1e-13);
    CHECK(rel(re_k0_rotated(0.2).value, kReK0Rot_02) < 1e-13);
    const double u = rotated_k0_cutoff(1.0, 1e-12);
    CHECK(u > 0.0);
    CHECK(rotated_k0_cutoff(1.0, 1e-6) <= u);
}

TEST_CASE("contour derivatives match finite differences of the direct route") {
    const double h = 1e-3;
    const double x = 1.3, tau = 0.8;
    auto p = [&](double y) { return psi_direct(tau, y).value; };
    const double d1 = (p(x - 2 * h) - 8 * p(x - h) + 8 * p(x + h) - p(x + 2 * h)) / (12 * h);
    const double d2 = (-p(x - 2 * h) + 16 * p(x - h) - 30 * p(x) + 16 * p(x + h) - p(x + 2 * h)) / (12 * h * h);
    CHECK(std::abs(psi_derivative_x(tau, x, 1).value - d1) < 1e-10);
    CHECK(std::abs(psi_derivative_x(tau, x, 2).value - d2) < 1e-7);
    const auto all = psi_derivatives(tau, x);
    CHECK(std::abs(all[0].value - p(x)) < 1e-13);
    CHECK(std::abs(all[1].value - d1) < 1e-10);
    CHECK_THROWS_AS(psi_derivative_x(tau, x, 5), DomainError);
    CHECK_THROWS_AS(psi_derivative_x(tau, x, 0), DomainError);

    auto q = [&](double y) { return phi_direct(tau, y).value; };
    const double e1 = (q(x - 2 * h) - 8 * q(x - h) + 8 * q(x + h) - q(x + 2 * h)) / (12 * h);
    CHECK(std::abs(phi_derivative_x(tau, x).value - e1) < 1e-10);
}

TEST_CASE("ode residual is at rounding level") {
    for (double tau : {0.5, 1.0, 2.0, 4.0})
        for (double x : {0.25, 1.0, 4.0}) CHECK(ode_residual(tau, x) <= 1e-8);
}

TEST_CASE("ode residual detects a wrong kernel") {
    // The same derivatives with tau shifted no longer satisfy the equation.
    std::array<double, 5> d{};
    const auto ds = psi_derivatives(1.0, 1.0);
    for (int i = 0; i < 5; ++i) d[i] = ds[i].value;
    const auto good = ode_terms(1.0, 1.0, d);
    const auto bad = ode_terms(1.3, 1.0, d);
    CHECK(std::abs(good.sum()) / good.scale() < 1e-8);
    CHECK(std::abs(bad.sum()) / bad.scale() > 1e-3);
}

TEST_CASE("index identity") {
    const auto r = index_integral_check(1.0, 0.5);
    CHECK(rel(r.rhs, kIdentityRhs) < 1e-13);
    CHECK(std::abs(r.lhs - r.rhs) < 1e-6);
    for (double x : {0.5, 2.0})
        for (double u : {0.0, 1.0}) {
            const auto s = index_integral_check(x, u);
            CHECK(std::abs(s.lhs - s.rhs) < 1e-6);
        }
}

TEST_CASE("pointwise bound") {
    for (double delta : {0.0, 0.7, 1.2}) {
        const auto b = check_bound_delta(2.0, 0.5, delta);
        CHECK(b.satisfied);
        CHECK(b.lhs <= b.rhs);
    }
    CHECK_THROWS_AS(check_bound_delta(1.0, 1.0, 1.6), DomainError);
    // e^{-delta |tau|} factor
    CHECK(bound_delta_rhs(3.0, 1.0, 0.7) < bound_delta_rhs(1.0, 1.0, 0.7));
}
