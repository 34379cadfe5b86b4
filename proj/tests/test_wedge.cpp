#include "doctest.h"

#include <cmath>

#include "ixt/transforms.hpp"
#include "ixt/wedge.hpp"

using namespace ixt;
using namespace ixt::wedge;

namespace {

WedgeParams gaussian(double beta = 1.4) { return {beta, transforms::canonical::gaussian_index()}; }

}  // namespace

TEST_CASE("wedge parameter validation") {
    CHECK_NOTHROW(gaussian().validate());
    CHECK_THROWS_AS(gaussian(0.0).validate(), DomainError);
    CHECK_THROWS_AS(gaussian(2 * pi).validate(), DomainError);
    // e^{-|tau|} decay does not absorb e^{beta |tau|} for beta >= 0.9.
    CHECK_NOTHROW((WedgeParams{0.5, transforms::canonical::slow_index()}.validate()));
    CHECK_THROWS_AS((WedgeParams{1.4, transforms::canonical::slow_index()}.validate()), DomainError);
    CHECK_THROWS_AS((PolarPoint{1.0, 1.5}.validate(gaussian())), DomainError);
    CHECK_THROWS_AS((PolarPoint{0.0, 0.5}.validate(gaussian())), DomainError);
    CHECK_THROWS_AS((PolarPoint{1.0, -0.1}.validate(gaussian())), DomainError);
}

TEST_CASE("solution at theta zero is the adjoint transform") {
    const auto p = gaussian();
    CHECK(wedge_u(p, {0.8, 0.0}).value == transforms::adjoint_G(p.g, 0.8).value);
    CHECK(initial_condition_check(p, {0.5, 1.0, 2.0}) <= 1e-10);
    CHECK(initial_condition_check(p, {0.5, 1.0, 2.0}, InitialMode::independent) <= 1e-8);
}

TEST_CASE("semi-analytic residual") {
    const auto p = gaussian();
    for (const PolarPoint pt : {PolarPoint{0.5, 0.1}, PolarPoint{2.0, 0.6}}) {
        const auto r = pde_residual(p, pt);
        CHECK(r.residual <= 1e-8);
        CHECK(r.scale > 0.0);
        CHECK(r.mode == ResidualMode::semi_analytic);
    }
}

TEST_CASE("finite-difference residual") {
    const auto p = gaussian();
    const auto r = pde_residual(p, {1.0, 0.3}, 2e-2, ResidualMode::finite_difference);
    CHECK(r.residual <= 1e-4);
    CHECK(r.h == 2e-2);
    // The stencil theta - 2h leaves the wedge.
    CHECK_THROWS_AS(pde_residual(p, {1.0, 0.01}, 1e-2, ResidualMode::finite_difference), DomainError);
}

TEST_CASE("solution decays along rays") {
    const auto p = gaussian();
    for (double th : {0.1, 0.6}) CHECK(decay_ratio(p, th) < 1e-2);
}
