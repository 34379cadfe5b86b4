#pragma once

// Solution of the fourth-order equation on the wedge 0 <= theta < beta,
//
//   d^2/dr^2 [ (r d/dr)^2 u + d^2u/dtheta^2 ] + 16 u = 0,
//   u(r, theta) = int_R Psi_tau(r) e^{theta tau} g(tau) dtau,
//
// with residual and initial-condition checks.

#include <vector>

#include "ixt/quadrature.hpp"
#include "ixt/types.hpp"

namespace ixt::wedge {

struct WedgeParams {
    /// Opening angle in (0, 2 pi).
    double beta = 1.0;
    /// Must satisfy int |g| e^{beta |tau|} dtau < inf according to its decay
    /// metadata.
    quad::SampledFunction g;

    void validate() const;
};

struct PolarPoint {
    double r = 1.0;
    double theta = 0.0;

    void validate(const WedgeParams& params) const;
};

EvalResult wedge_u(const WedgeParams& params, const PolarPoint& pt);

enum class ResidualMode {
    /// r-derivatives of the kernel by contour differentiation, theta
    /// derivatives in closed form.
    semi_analytic,
    /// Central differences of wedge_u on a 5x5 stencil, one Richardson step.
    finite_difference,
};

struct ResidualReport {
    /// |sum of terms| / largest |term|
    double residual = 0.0;
    /// Largest |term|.
    double scale = 0.0;
    ResidualMode mode = ResidualMode::semi_analytic;
    double h = 0.0;
};

/// h is the stencil spacing of the finite-difference mode; the stencil
/// r +- 2h, theta +- 2h must lie inside the wedge in that mode.
ResidualReport pde_residual(const WedgeParams& params, const PolarPoint& pt, double h = 1e-2,
                            ResidualMode mode = ResidualMode::semi_analytic);

enum class InitialMode {
    /// wedge_u(r, 0) against adjoint_G on the same quadrature path.
    same_path,
    /// wedge_u(r, 0) against the cosine-integral route of the adjoint.
    independent,
};

/// max |wedge_u(r, 0) - (G g)(r)| over the nodes.
double initial_condition_check(const WedgeParams& params, const std::vector<double>& r_nodes,
                               InitialMode mode = InitialMode::same_path);

/// |u(far, theta)| / |u(near, theta)|
double decay_ratio(const WedgeParams& params, double theta, double near = 0.5, double far = 10.0);

}  // namespace ixt::wedge
