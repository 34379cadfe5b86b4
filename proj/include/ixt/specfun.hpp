#pragma once

// Scalar special functions behind every kernel in the library: complex
// log-gamma, Bessel J of imaginary order and the Macdonald function K in the
// two flavours the kernels need (imaginary order with real argument, real
// order with complex argument).
//
// All functions are pure and reentrant.

#include "ixt/types.hpp"

namespace ixt::specfun {

/// Documented envelope of bessel_j_imag_order.
inline constexpr double kMaxBesselOrder = 50.0;
inline constexpr double kMaxBesselArgument = 100.0;

/// Principal branch of log Gamma(z), cut along the negative real axis.
/// Throws DomainError at the poles z = 0, -1, -2, ...
ComplexScalar log_gamma(ComplexScalar z);

/// Gamma(z); zero is never returned, poles throw.
ComplexScalar gamma(ComplexScalar z);

/// 1 / Gamma(z). Entire, so the poles of Gamma map to an exact zero.
ComplexScalar reciprocal_gamma(ComplexScalar z);

/// Euler's beta function B(a, b) for a, b > 0.
double beta(double a, double b);

/// K_{i tau}(z) for real z > 0 by trapezoidal quadrature of
/// int_0^inf exp(-z cosh u) cos(tau u) du. Even in tau by construction.
EvalResult macdonald_imag_order(double tau, double z);

/// J_{i tau}(z) for 0 < z <= 100, |tau| <= 50 by the ascending series with
/// compensated summation. J_{-i tau}(z) = conj J_{i tau}(z).
ComplexEvalResult bessel_j_imag_order(double tau, double z);

/// K_nu(w) for real nu >= 0 and Re w > 0, by the same integral with a
/// complex exponent. K_nu(conj w) = conj K_nu(w).
ComplexEvalResult macdonald_complex_arg(double nu, ComplexScalar w);

}  // namespace ixt::specfun
