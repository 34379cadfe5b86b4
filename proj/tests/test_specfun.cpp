#include "doctest.h"

#include <cmath>

#include "ixt/specfun.hpp"

using namespace ixt;
using namespace ixt::specfun;

TEST_CASE("log_gamma at trivial points") {
    CHECK(std::abs(log_gamma(1.0)) < 1e-14);
    CHECK(std::abs(log_gamma(2.0)) < 1e-14);
    CHECK(std::abs(log_gamma(0.5) - std::log(std::sqrt(pi))) < 1e-14);
}

TEST_CASE("log_gamma off the real axis matches reference") {
    const ComplexScalar v = log_gamma({2.5, 1.5});
    CHECK(std::abs(v.real() - -0.2271122407932273221864) < 1e-13);
    CHECK(std::abs(v.imag() - 1.1712929346646030339758) < 1e-13);
}

TEST_CASE("log_gamma throws at poles") {
    CHECK_THROWS_AS(log_gamma(0.0), DomainError);
    CHECK_THROWS_AS(log_gamma(-3.0), DomainError);
    CHECK_NOTHROW(log_gamma(-3.5));
    CHECK(reciprocal_gamma(-2.0) == ComplexScalar(0.0));
}

TEST_CASE("log_gamma reflection on a grid") {
    for (double re = -4.75; re < 5.0; re += 0.5) {
        for (double im : {-7.0, -0.3, 0.0, 0.8, 12.0}) {
            const ComplexScalar z(re, im);
            const ComplexScalar lhs = log_gamma(z) + log_gamma(1.0 - z);
            const ComplexScalar rhs = std::log(pi / std::sin(pi * z));
            const ComplexScalar d = lhs - rhs;
            const double turns = std::round(d.imag() / (2.0 * pi));
            CHECK(std::abs(d - ComplexScalar(0.0, 2.0 * pi * turns)) < 1e-12);
        }
    }
}

TEST_CASE("log_gamma relative accuracy at large argument") {
    // Gamma(n) = (n-1)! for real log, and |Gamma(i y)|^2 = pi / (y sinh(pi y)).
    CHECK(std::abs(log_gamma(171.0).real() - std::lgamma(171.0)) < 1e-13 * std::lgamma(171.0));
    const double y = 150.0;
    const double expect = 0.5 * (std::log(pi / y) - (pi * y + std::log1p(-std::exp(-2 * pi * y)) - std::log(2.0)));
    CHECK(std::abs(log_gamma({0.0, y}).real() - expect) < 1e-13 * std::abs(expect));
}

TEST_CASE("beta") {
    CHECK(beta(1, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(beta(0.5, 0.5) - pi) < 1e-14);
    CHECK(std::abs(beta(0.25, 0.25) - 7.416298709205487673735) < 1e-13);
    CHECK_THROWS_AS(beta(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(beta(1.0, -2.0), DomainError);
}

TEST_CASE("macdonald_imag_order") {
    const auto k0 = macdonald_imag_order(0.0, 1.0);
    CHECK(std::abs(k0.value - 0.42102443824070834) < 1e-13);
    CHECK(k0.err_est >= 0.0);
    CHECK(std::abs(macdonald_imag_order(1.0, 2.0).value - 0.09238545989039118153686) < 1e-13);
    CHECK(macdonald_imag_order(1.7, 0.3).value == macdonald_imag_order(-1.7, 0.3).value);
    CHECK_THROWS_AS(macdonald_imag_order(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(macdonald_imag_order(1.0, -2.0), DomainError);
}

TEST_CASE("macdonald_imag_order large-argument envelope") {
    for (double z = 20.0; z <= 60.0; z += 5.0) {
        const double lead = std::sqrt(pi / (2 * z)) * std::exp(-z);
        const double k = macdonald_imag_order(0.0, z).value;
        CHECK(std::abs(k - lead) / lead <= 0.1);
    }
}

TEST_CASE("bessel_j_imag_order") {
    const auto j0 = bessel_j_imag_order(0.0, 1.0);
    CHECK(std::abs(j0.value.real() - 0.7651976865579666) < 1e-14);
    CHECK(std::abs(j0.value.imag()) <= 1e-15);
    const auto j = bessel_j_imag_order(1.0, 2.0 * std::sqrt(2.0)).value;
    CHECK(std::abs(j.real() - -0.3000322433523603115637) < 1e-13);
    CHECK(std::abs(j.imag() - 1.0204100856067602659855) < 1e-13);
    CHECK_THROWS_AS(bessel_j_imag_order(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(bessel_j_imag_order(51.0, 1.0), DomainError);
    CHECK_THROWS_AS(bessel_j_imag_order(1.0, 101.0), DomainError);
}

TEST_CASE("bessel_j_imag_order conjugate symmetry across the envelope") {
    for (double tau : {0.01, 0.5, 3.0, 17.0, 49.0}) {
        for (double z : {0.05, 1.0, 7.5, 40.0, 100.0}) {
            const auto a = bessel_j_imag_order(tau, z).value;
            const auto b = bessel_j_imag_order(-tau, z).value;
            CHECK(std::abs(a - std::conj(b)) <= 1e-14 * std::max(1.0, std::abs(a)));
        }
        CHECK(std::abs(bessel_j_imag_order(0.0, 3.3).value.imag()) <= 1e-15);
    }
}

TEST_CASE("macdonald_complex_arg") {
    const ComplexScalar z(1.0, 1.0);
    const ComplexScalar half = std::sqrt(pi / (2.0 * z)) * std::exp(-z);
    CHECK(std::abs(macdonald_complex_arg(0.5, z).value - half) < 1e-12);

    const ComplexScalar w(2.0, 1.0);
    const ComplexScalar k0 = macdonald_complex_arg(0.0, w).value;
    const ComplexScalar k1 = macdonald_complex_arg(1.0, w).value;
    const ComplexScalar k2 = macdonald_complex_arg(2.0, w).value;
    CHECK(std::abs(k2 - k0 - 2.0 / w * k1) < 1e-11);
    CHECK(std::abs(k1 - ComplexScalar(0.03629159240042704557, -0.12406383457283476224)) < 1e-12);

    const auto real_arg = macdonald_complex_arg(0.0, ComplexScalar(3.0, 0.0));
    CHECK(real_arg.value.imag() == 0.0);
    CHECK(std::abs(real_arg.value.real() - macdonald_imag_order(0.0, 3.0).value) < 1e-14);
    CHECK(std::abs(real_arg.value.real() - 0.03473950438627924807) < 1e-13);

    const ComplexScalar r(0.4, 2.7);
    const auto a = macdonald_complex_arg(0.0, r).value;
    const auto b = macdonald_complex_arg(0.0, std::conj(r)).value;
    CHECK(std::abs(a - std::conj(b)) < 1e-15);
    CHECK_THROWS_AS(macdonald_complex_arg(0.0, ComplexScalar(0.0, 1.0)), DomainError);
    CHECK_THROWS_AS(macdonald_complex_arg(-1.0, ComplexScalar(1.0, 0.0)), DomainError);
}
