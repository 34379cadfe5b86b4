#include "doctest.h"

#include <atomic>
#include <cmath>
#include <memory>

#include "ixt/transforms.hpp"

using namespace ixt;
using namespace ixt::transforms;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Independent arbitrary-precision reference values.
constexpr double kF_zero_mean_1 = -0.018937813909136840;
constexpr double kF_two_exp_1 = 0.021914583306089019;
constexpr double kG_gauss_1 = 0.013282022621120994;
constexpr double kGprime_gauss_1 = -0.027954793616525954;
constexpr double kG_slow_1 = 0.023950625356556729;
constexpr double kL0_zero_mean = 0.33797622366520132;
constexpr double kGaussFourier_1 = 0.13767382872579594;

}  // namespace

TEST_CASE("canonical functions") {
    const auto f = canonical::zero_mean();
    CHECK(f(0.0) == 1.0);
    CHECK(f(1.0) == 0.0);
    const auto g = canonical::gaussian_index();
    CHECK(g(-1.3) == g(1.3));
    CHECK(rel(canonical::gaussian_index_fourier(1.0), kGaussFourier_1) < 1e-15);
    const auto s = canonical::slow_index();
    CHECK(s(2.0) == doctest::Approx(4.0 * std::exp(-2.0)).epsilon(1e-15));
}

TEST_CASE("mellin transform of the canonical inputs") {
    const ComplexScalar s{0.7, 0.3};
    const auto m = mellin_numeric(canonical::zero_mean(), s);
    CHECK(std::abs(m.value - canonical::zero_mean_mellin(s)) < 1e-12);
    const auto t = mellin_numeric(canonical::two_exponentials(), s);
    CHECK(std::abs(t.value - canonical::two_exponentials_mellin(s)) < 1e-12);
    CHECK_THROWS_AS(mellin_numeric(canonical::zero_mean(), {-0.5, 0.0}), DivergenceError);
    const auto line = mellin_line(canonical::zero_mean(), 0.5, {0.0, 1.0, 2.0});
    REQUIRE(line.size() == 3);
    CHECK(line[2].s == ComplexScalar(0.5, 2.0));
}

TEST_CASE("fourier cosine of e^{-t}") {
    auto e = [](double t) { return std::exp(-t); };
    for (double x : {0.0, 0.5, 3.0}) {
        const double expect = std::sqrt(2.0 / pi) / (1.0 + x * x);
        CHECK(std::abs(fourier_cosine(e, x).value - expect) < 1e-13);
    }
}

TEST_CASE("forward transform against reference values") {
    CHECK(rel(forward_F(canonical::zero_mean(), 1.0).value, kF_zero_mean_1) < 1e-12);
    CHECK(rel(forward_F(canonical::two_exponentials(), 1.0).value, kF_two_exp_1) < 1e-12);
    CHECK(rel(forward_F_mellin(canonical::zero_mean_mellin, 1.0).value, kF_zero_mean_1) < 1e-10);
    CHECK(forward_F(canonical::zero_mean(), -1.0).value == forward_F(canonical::zero_mean(), 1.0).value);
}

TEST_CASE("forward routes agree") {
    const auto f = canonical::zero_mean();
    for (double tau : {0.5, 2.0}) {
        const double a = forward_F(f, tau).value;
        const double b = forward_F_mellin(canonical::zero_mean_mellin, tau).value;
        const double c = forward_F_composition(f, tau).value;
        CHECK(rel(b, a) < 1e-6);
        CHECK(rel(c, a) < 1e-6);
    }
}

TEST_CASE("forward sup bound") {
    BoundRequest req;
    req.selector = BoundSelector::forward_sup;
    req.fn = canonical::zero_mean();
    req.nodes = {0.5, 1.0, 2.0, 4.0};
    const auto rep = bound_report(req);
    REQUIRE(rep.size() == 4);
    for (const auto& r : rep) CHECK(r.satisfied);
    CHECK(rel(norm_L0(canonical::zero_mean()), kL0_zero_mean) < 1e-10);
    CHECK(rep[0].rhs == doctest::Approx(4.0 / pi * kL0_zero_mean).epsilon(1e-10));
}

TEST_CASE("adjoint transform against reference values") {
    CHECK(rel(adjoint_G(canonical::gaussian_index(), 1.0).value, kG_gauss_1) < 1e-12);
    CHECK(rel(adjoint_G(canonical::slow_index(), 1.0).value, kG_slow_1) < 1e-10);
    CHECK(rel(adjoint_G_derivative(canonical::gaussian_index(), 1.0).value, kGprime_gauss_1) < 1e-9);
    CHECK_THROWS_AS(adjoint_G(canonical::gaussian_index(), 0.0), DomainError);
}

TEST_CASE("adjoint routes agree") {
    const auto g = canonical::gaussian_index();
    for (double x : {0.5, 1.0, 2.0, 4.0}) {
        const double a = adjoint_G(g, x).value;
        CHECK(std::abs(adjoint_G_fourier_route(canonical::gaussian_index_fourier, x).value - a) < 1e-6 * std::abs(a));
        CHECK(std::abs(adjoint_G_fourier_route(g, x).value - a) < 1e-6 * std::abs(a));
    }
    const auto s = canonical::slow_index();
    CHECK(rel(adjoint_G_fourier_route(s, 1.0).value, kG_slow_1) < 1e-8);
}

TEST_CASE("weighted adjoint at theta zero is the adjoint") {
    const auto g = canonical::gaussian_index();
    CHECK(adjoint_G_weighted(g, 0.7, 0.0).value == adjoint_G(g, 0.7).value);
}

TEST_CASE("index truncation") {
    const auto g = canonical::gaussian_index();
    const double t1 = index_truncation(g, 1.0, 0.0, 1e-8);
    const double t2 = index_truncation(g, 1.0, 0.0, 1e-14);
    CHECK(t1 > 0.0);
    CHECK(t2 >= t1);
    // e^{theta tau} beats the kernel decay e^{-pi |tau| / 2} times e^{-|tau|}.
    CHECK_THROWS_AS(index_truncation(canonical::slow_index(), 1.0, 3.0, 1e-10), TruncationError);
}

TEST_CASE("adjoint pointwise bound at p = 2") {
    BoundRequest req;
    req.selector = BoundSelector::adjoint_pointwise;
    req.fn = canonical::gaussian_index();
    req.params = {0.5, 2.0};
    req.nodes = {0.5, 1.0, 2.0, 4.0};
    for (const auto& r : bound_report(req)) CHECK(r.satisfied);
    const double n2 = norm_index_p(canonical::gaussian_index(), 2.0);
    // int tau^4 e^{-2 tau^2} dtau = 3 sqrt(pi) / (4 2^{5/2})
    CHECK(n2 == doctest::Approx(std::sqrt(3.0 * std::sqrt(pi) / (4.0 * std::pow(2.0, 2.5)))).epsilon(1e-12));
    CHECK_THROWS_AS(adjoint_pointwise_constant(3.0, 1.0), DomainError);
}

TEST_CASE("lebesgue params validation") {
    LebesgueParams p{0.5, 0.5};
    CHECK_THROWS_AS(p.validate(), DomainError);
    LebesgueParams q{0.5, 2.0};
    CHECK(q.q() == doctest::Approx(2.0));
    CHECK_THROWS_AS(embedding_constant({1.5, 2.0}), DomainError);
}

TEST_CASE("invert_G of the zero function is zero and x = 0 is zero") {
    auto zero = [](double) { return 0.0; };
    CHECK(invert_G(zero, 0.0).value == 0.0);
    CHECK(invert_G(zero, 1.0).value == 0.0);
    CHECK_THROWS_AS(invert_G(nullptr, 1.0), DomainError);
}

TEST_CASE("invert_F tail monitor rejects slowly decaying input") {
    auto slow = [](double tau) { return std::exp(std::abs(tau) * 1.5); };
    CHECK_THROWS_AS(invert_F(slow, 1.0), TruncationError);
    CHECK_THROWS_AS(invert_F([](double) { return 0.0; }, -1.0), DomainError);
}

TEST_CASE("evaluate_grid keeps order across workers") {
    std::vector<double> xs;
    for (int i = 0; i < 40; ++i) xs.push_back(0.1 * i);
    const auto r = evaluate_grid(xs, 4, "sq", [](double x) { return EvalResult{x * x, 0.0}; });
    REQUIRE(r.grid.size() == xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        CHECK(r.grid[i].abscissa == xs[i]);
        CHECK(r.grid[i].value == xs[i] * xs[i]);
    }
    CHECK(r.route == "sq");
}

TEST_CASE("memoize evaluates once per abscissa") {
    auto calls = std::make_shared<std::atomic<int>>(0);
    auto m = memoize([calls](double x) {
        ++*calls;
        return 2 * x;
    });
    CHECK(m(1.5) == 3.0);
    CHECK(m(1.5) == 3.0);
    CHECK(m(2.0) == 4.0);
    CHECK(*calls == 2);
}

TEST_CASE("adjoint derivative routes agree") {
    const auto g = canonical::gaussian_index();
    CHECK(rel(adjoint_G_derivative_fourier_route(canonical::gaussian_index_fourier, 1.0).value, kGprime_gauss_1) < 1e-13);
    for (double x : {0.01, 0.5, 4.0}) {
        const double a = adjoint_G_derivative(g, x).value;
        CHECK(std::abs(adjoint_G_derivative_fourier_route(canonical::gaussian_index_fourier, x).value - a) <= 1e-9 * std::abs(a));
        CHECK(std::abs(adjoint_G_derivative_fourier_route(g, x).value - a) <= 1e-9 * std::abs(a));
    }
}

TEST_CASE("adjoint inversion recovers tau^2 e^{-tau^2}") {
    auto Gprime = memoize([](double y) {
        return adjoint_G_derivative_fourier_route(canonical::gaussian_index_fourier, y).value;
    });
    const auto g = canonical::gaussian_index();
    for (double x : {0.5, 1.0, 2.0}) {
        const auto r = invert_G(Gprime, x);
        CHECK(std::abs(r.value - g(x)) < 1e-8);
        CHECK(r.err_est < 1e-6);
    }
}
