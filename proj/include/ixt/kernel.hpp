#pragma once

// The product-of-Bessel kernels
//
//   Psi_tau(x) = K_{i tau}(2 sqrt(2x)) Im J_{i tau}(2 sqrt(2x)) / sinh(pi tau / 2)
//   Phi_tau(x) = K_{i tau}(2 sqrt(2x)) Re J_{i tau}(2 sqrt(2x))
//
// Psi is available by three independent routes: the direct product, a cosine
// integral over Re K_0 of rotated argument, and a Mellin-Barnes contour
// integral. x-derivatives come from differentiating the contour integrand.

#include <array>
#include <string>
#include <string_view>

#include "ixt/quadrature.hpp"
#include "ixt/types.hpp"

namespace ixt::kernel {

/// Below this |tau| the direct route is a 0/0 quotient and refuses to run.
inline constexpr double kTauMin = 1e-3;

enum class Route { direct, fourier, mellin_barnes };

std::string_view route_name(Route r);
/// Accepts "direct", "fourier", "mellin_barnes" (or "mb"); throws DomainError.
Route parse_route(std::string_view name);

struct KernelPoint {
    double tau = 0.0;
    double x = 0.0;
    Route route = Route::direct;
    double value = 0.0;
    double err_est = 0.0;
};

/// Contour-route result; imag_residue is |Im| of the contour integral after
/// scaling, which vanishes analytically.
struct ContourEval : EvalResult {
    double imag_residue = 0.0;
    double height = 0.0;
};

struct BoundReport {
    double tau = 0.0;
    double x = 0.0;
    double delta = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    bool satisfied = false;
};

EvalResult psi_direct(double tau, double x);
EvalResult psi_fourier(double tau, double x, const quad::QuadratureSpec& spec = {});
ContourEval psi_mellin_barnes(double tau, double x, const quad::ContourSpec& contour = {},
                              const quad::QuadratureSpec& spec = {});

/// Direct route where it is available, cosine-integral route otherwise
/// (|tau| < kTauMin or outside the J envelope).
EvalResult psi_auto(double tau, double x);

KernelPoint psi(Route route, double tau, double x, const quad::ContourSpec& contour = {});

/// n-th x-derivative, 1 <= order <= 4.
ContourEval psi_derivative_x(double tau, double x, int order,
                             const quad::ContourSpec& contour = {},
                             const quad::QuadratureSpec& spec = {});

/// Psi and its first four x-derivatives from one contour sweep.
std::array<ContourEval, 5> psi_derivatives(double tau, double x,
                                           const quad::ContourSpec& contour = {},
                                           const quad::QuadratureSpec& spec = {});

EvalResult phi_direct(double tau, double x);

/// dPhi_tau/dx by contour integration; contour.gamma must lie in (0, 1).
ContourEval phi_derivative_x(double tau, double x, const quad::ContourSpec& contour = {},
                             const quad::QuadratureSpec& spec = {});

/// Gamma(s/2) Gamma((s + i tau)/2) Gamma((s - i tau)/2) / Gamma((1 - s)/2),
/// the contour density of Psi (Psi_tau(x) = -(1/(8 sqrt pi)) times its
/// inverse Mellin integral).
ComplexScalar psi_mellin_density(double tau, ComplexScalar s);

/// Smallest U with int_U^inf K_0(2 sqrt(2 x cosh u)) du <= tol, the
/// truncation of every integral over Re K_0(4 e^{i pi/4} sqrt(x cosh u)).
double rotated_k0_cutoff(double x, double tol);

/// Re K_0(4 e^{i pi/4} sqrt(y)), the building block of the cosine route.
EvalResult re_k0_rotated(double y);

/// (4/pi) e^{-delta |tau|} K_0^2(cos(delta/2) sqrt(2 x cos delta)).
double bound_delta_rhs(double tau, double x, double delta);

/// |Psi_tau(x)| (cosine route) against bound_delta_rhs, delta in [0, pi/2).
BoundReport check_bound_delta(double tau, double x, double delta);

struct IndexIntegralReport {
    double x = 0.0;
    double u = 0.0;
    /// int_0^inf cos(tau u) Psi_tau(x) dtau
    double lhs = 0.0;
    double lhs_err = 0.0;
    /// -Re K_0(4 e^{i pi/4} sqrt(x cosh u))
    double rhs = 0.0;
    double rhs_err = 0.0;
    double truncation = 0.0;
    double tail_bound = 0.0;
};

IndexIntegralReport index_integral_check(double x, double u);

/// Terms of x^2 y'''' + 5x y''' + (4 + tau^2) y'' + 16 y for given values
/// y, y', ..., y'''' at x.
struct OdeTerms {
    double fourth = 0.0;
    double third = 0.0;
    double second = 0.0;
    double zeroth = 0.0;

    double sum() const { return fourth + third + second + zeroth; }
    double scale() const;
};

OdeTerms ode_terms(double tau, double x, const std::array<double, 5>& derivatives);

/// |operator applied to Psi| / largest |term|, derivatives from the contour.
double ode_residual(double tau, double x, const quad::ContourSpec& contour = {});

}  // namespace ixt::kernel
